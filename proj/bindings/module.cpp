// Python surface for the activity-pattern pipeline.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "actpat/embed.hpp"
#include "actpat/eval.hpp"
#include "actpat/infer.hpp"
#include "actpat/ingest.hpp"
#include "actpat/insight.hpp"
#include "actpat/learn.hpp"
#include "actpat/rng.hpp"
#include "actpat/synth.hpp"

namespace py = pybind11;
using namespace actpat;

namespace {

Attribute attribute_or_throw(const std::string& name) {
    const auto attr = attribute_from_string(name);
    if (!attr.has_value()) throw ValueError("unknown attribute: " + name);
    return *attr;
}

UciLayout uci_layout(const std::string& root, const std::string& split, const std::string& accel) {
    UciLayout layout;
    layout.root = root;
    if (split == "test") layout.split = UciSplit::Test;
    else if (split == "train") layout.split = UciSplit::Train;
    else throw ValueError("split must be 'test' or 'train'");
    if (accel == "total") layout.accel = UciAccelSource::Total;
    else if (accel == "body") layout.accel = UciAccelSource::Body;
    else throw ValueError("accel must be 'total' or 'body'");
    return layout;
}

Dataset dataset_of(const std::vector<Session>& sessions, const std::string& target) {
    return build_dataset(sessions, attribute_or_throw(target), FeatureSchema::for_sensors(common_sensors(sessions)));
}

py::dict metrics_dict(const Metrics& m) {
    py::dict d;
    const auto& names = Metrics::names();
    const auto values = m.values();
    for (size_t i = 0; i < names.size(); ++i) d[py::str(names[i])] = values[i];
    return d;
}

}  // namespace

PYBIND11_MODULE(_actpat, m) {
    m.doc() = "statistical-feature activity pattern pipeline";
    m.attr("__version__") = "0.1.0";

    py::register_exception<Error>(m, "PipelineError", PyExc_RuntimeError);

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("x", [](const Dataset& d) { return d.x; })
        .def_property_readonly("targets", [](const Dataset& d) { return d.targets; })
        .def_property_readonly("row_ids", [](const Dataset& d) { return d.row_ids; })
        .def_property_readonly("feature_names", [](const Dataset& d) { return d.schema.names(); })
        .def_property_readonly("attribute", [](const Dataset& d) { return std::string(to_string(d.attribute)); })
        .def_property_readonly("classes", &Dataset::classes)
        .def("subset", &Dataset::subset, py::arg("row_indices"))
        .def("__len__", [](const Dataset& d) { return size_t(d.rows()); })
        .def("__repr__", [](const Dataset& d) {
            return "<Dataset " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()) + " target=" +
                   std::string(to_string(d.attribute)) + ">";
        });

    py::class_<Model>(m, "Model")
        .def_property_readonly("algo", [](const Model& mo) { return spec_name(mo.spec()); })
        .def_property_readonly("classes", &Model::classes)
        .def_property_readonly("feature_names", &Model::feature_names)
        .def("predict",
             [](const Model& mo, const std::vector<double>& row) { return mo.predict(row); },
             py::arg("features"))
        .def("score",
             [](const Model& mo, const std::vector<double>& row) { return mo.score(row); },
             py::arg("features"))
        .def("predict_batch", &Model::predict_batch, py::arg("x"))
        .def("score_batch", &Model::score_batch, py::arg("x"))
        .def("to_json", &Model::to_json)
        .def("save", &Model::save, py::arg("path"))
        .def_static("load", &Model::load, py::arg("path"))
        .def_static("from_json", &Model::from_json, py::arg("text"))
        .def("__repr__", [](const Model& mo) {
            return "<Model " + spec_name(mo.spec()) + " classes=" + std::to_string(mo.classes().size()) + ">";
        });

    py::class_<Metrics>(m, "Metrics")
        .def_readonly("accuracy", &Metrics::accuracy)
        .def_readonly("precision_weighted", &Metrics::precision_weighted)
        .def_readonly("recall_weighted", &Metrics::recall_weighted)
        .def_readonly("f1_weighted", &Metrics::f1_weighted)
        .def_readonly("f1_macro", &Metrics::f1_macro)
        .def_readonly("f1_micro", &Metrics::f1_micro)
        .def_readonly("roc_auc_ovr", &Metrics::roc_auc_ovr)
        .def("as_dict", &metrics_dict)
        .def("__repr__", [](const Metrics& me) {
            return "<Metrics accuracy=" + std::to_string(me.accuracy) + ">";
        });

    py::class_<CvReport>(m, "CvReport")
        .def_readonly("algo", &CvReport::algo)
        .def_readonly("folds", &CvReport::folds)
        .def_readonly("runs", &CvReport::runs)
        .def_readonly("fold_metrics", &CvReport::fold_metrics)
        .def_readonly("run_means", &CvReport::run_means)
        .def_readonly("grand_mean", &CvReport::grand_mean)
        .def_readonly("fit_seconds_total", &CvReport::fit_seconds_total)
        .def_readonly("fit_seconds_mean", &CvReport::fit_seconds_mean)
        .def("__repr__", [](const CvReport& r) {
            return "<CvReport " + r.algo + " accuracy=" + std::to_string(r.grand_mean.accuracy) + ">";
        });

    py::class_<IgEntry>(m, "IgEntry")
        .def_readonly("feature", &IgEntry::feature)
        .def_readonly("ig_bits", &IgEntry::ig_bits)
        .def_readonly("cuts", &IgEntry::cuts)
        .def("__repr__", [](const IgEntry& e) {
            return "<IgEntry " + e.feature + " ig=" + std::to_string(e.ig_bits) + ">";
        });

    py::class_<IgReport>(m, "IgReport")
        .def_readonly("class_entropy_bits", &IgReport::class_entropy_bits)
        .def_readonly("entries", &IgReport::entries);

    py::class_<ContingencyTable>(m, "ContingencyTable")
        .def_readonly("row_labels", &ContingencyTable::row_labels)
        .def_readonly("col_labels", &ContingencyTable::col_labels)
        .def_property_readonly("counts", [](const ContingencyTable& t) { return t.counts; })
        .def_readonly("row_totals", &ContingencyTable::row_totals)
        .def_readonly("col_totals", &ContingencyTable::col_totals)
        .def_readonly("grand_total", &ContingencyTable::grand_total)
        .def("to_csv", [](const ContingencyTable& t) { return contingency_csv(t); });

    py::class_<Embedding>(m, "Embedding")
        .def_property_readonly("y", [](const Embedding& e) { return e.y; })
        .def_readonly("row_ids", &Embedding::row_ids)
        .def_readonly("kl_history", &Embedding::kl_history)
        .def_readonly("kl_final", &Embedding::kl_final);

    m.def(
        "axis_statistics",
        [](const std::vector<double>& samples) {
            AxisSeries series;
            series.samples = samples;
            const auto stats = axis_statistics(series);
            return std::vector<double>(stats.begin(), stats.end());
        },
        py::arg("samples"), "The nine per-axis statistics, in canonical order.");

    m.def(
        "feature_names",
        [](const std::vector<std::string>& sensors) {
            std::vector<SensorKind> kinds;
            for (const auto& s : sensors) {
                const auto k = sensor_from_string(s);
                if (!k.has_value()) throw ValueError("unknown sensor: " + s);
                kinds.push_back(*k);
            }
            return FeatureSchema::for_sensors(kinds).names();
        },
        py::arg("sensors") = std::vector<std::string>{"accelerometer", "gyroscope", "magnetometer"});

    m.def(
        "load_study",
        [](const std::string& manifest, const std::string& target) {
            std::filesystem::path p = manifest;
            if (std::filesystem::is_directory(p)) p /= "manifest.csv";
            return dataset_of(load_study(read_manifest(p)), target);
        },
        py::arg("manifest"), py::arg("target"), "Featurized dataset from a study manifest.");

    m.def(
        "load_uci",
        [](const std::string& root, const std::string& split, const std::string& accel) {
            return dataset_of(load_uci_har(uci_layout(root, split, accel)), "activity");
        },
        py::arg("root"), py::arg("split") = "test", py::arg("accel") = "total",
        "Featurized activity dataset from a UCI HAR directory.");

    m.def(
        "synth_dataset",
        [](const std::string& target, int classes, int subjects, double separation, int samples,
           std::uint64_t seed, bool shuffle) {
            const Attribute attr = attribute_or_throw(target);
            auto sessions = generate_study(separable_profiles(attr, classes, separation, samples), subjects, seed);
            if (shuffle) shuffle_labels(sessions, attr, derive_seed(seed, {0x5f5eu}));
            return dataset_of(sessions, target);
        },
        py::arg("target") = "app", py::arg("classes") = 4, py::arg("subjects") = 28,
        py::arg("separation") = 20.0, py::arg("samples") = 3000, py::arg("seed") = 42,
        py::arg("shuffle") = false, "Deterministic separable synthetic dataset.");

    m.def(
        "fit",
        [](const std::string& algo, const Dataset& data, std::uint64_t seed) {
            return fit(spec_from_name(algo), data, seed);
        },
        py::arg("algo"), py::arg("dataset"), py::arg("seed") = 42);

    m.def(
        "cross_validate",
        [](const std::string& algo, const Dataset& data, int folds, int runs, std::uint64_t seed) {
            return cross_validate(spec_from_name(algo), data, folds, runs, seed);
        },
        py::arg("algo"), py::arg("dataset"), py::arg("folds") = 5, py::arg("runs") = 5, py::arg("seed") = 42);

    m.def(
        "stratified_folds",
        [](const std::vector<std::string>& targets, int k, std::uint64_t seed) {
            return stratified_folds(targets, k, seed).test_rows;
        },
        py::arg("targets"), py::arg("k") = 5, py::arg("seed") = 42, "Per-fold test row indices.");

    m.def(
        "compute_metrics",
        [](const std::vector<std::string>& truth, const std::vector<std::string>& predicted,
           const Eigen::MatrixXd& scores, const std::vector<std::string>& class_list) {
            return compute_metrics(truth, predicted, scores, class_list);
        },
        py::arg("truth"), py::arg("predicted"), py::arg("scores"), py::arg("class_list"));

    m.def(
        "entropy",
        [](const std::vector<double>& counts) { return entropy_bits(counts); },
        py::arg("counts"), "Shannon entropy in bits of a count vector.");

    m.def(
        "mdl_discretize",
        [](const std::vector<double>& values, const std::vector<int>& labels) {
            return mdl_discretize(values, labels);
        },
        py::arg("values"), py::arg("labels"), "Accepted Fayyad-Irani cut points, ascending.");

    m.def(
        "information_gain",
        [](const Dataset& d) { return information_gain(d); },
        py::arg("dataset"));
    m.def(
        "information_gain_of",
        [](const Eigen::MatrixXd& x, const std::vector<std::string>& names,
           const std::vector<std::string>& labels) { return information_gain(x, names, labels); },
        py::arg("x"), py::arg("feature_names"), py::arg("labels"));

    m.def(
        "contingency",
        [](const std::vector<std::string>& rows, const std::vector<std::string>& cols) {
            return contingency(rows, cols);
        },
        py::arg("row_labels"), py::arg("col_labels"));

    m.def(
        "transfer",
        [](const std::string& manifest, const std::string& uci_root, const std::string& target,
           const std::string& algo, std::uint64_t seed, const std::string& split, const std::string& accel) {
            TransferPlan plan;
            plan.target = attribute_or_throw(target);
            plan.spec = spec_from_name(algo);
            std::filesystem::path p = manifest;
            if (std::filesystem::is_directory(p)) p /= "manifest.csv";
            plan.train = load_study(read_manifest(p));
            plan.test = load_uci_har(uci_layout(uci_root, split, accel));
            TransferResult r = cross_predict(plan, seed);
            py::dict out;
            out["model"] = py::cast(std::move(r.model));
            out["row_ids"] = r.row_ids;
            out["activities"] = r.activities;
            out["predicted"] = r.predicted;
            out["contingency"] = py::cast(std::move(r.table));
            out["infogain"] = py::cast(std::move(r.ig));
            return out;
        },
        py::arg("manifest"), py::arg("uci_root"), py::arg("target"), py::arg("algo") = "svm",
        py::arg("seed") = 42, py::arg("split") = "test", py::arg("accel") = "total",
        "Train on a study, predict a UCI HAR split, cross-tabulate.");

    m.def(
        "tsne",
        [](const Eigen::MatrixXd& x, double perplexity, int iterations, std::uint64_t seed) {
            TsneParams params;
            params.perplexity = perplexity;
            params.iterations = iterations;
            params.seed = seed;
            return tsne(x, params);
        },
        py::arg("x"), py::arg("perplexity") = 30.0, py::arg("iterations") = 1000, py::arg("seed") = 42,
        "Exact 2-D t-SNE embedding.");
}
