// Python bindings for the H-CSC core. Tensors cross the boundary as numpy
// arrays: signals are (c, h, w) float32, filter banks (out, in, kh, kw).

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hcsc/classifier.hpp"
#include "hcsc/dataio.hpp"
#include "hcsc/inference.hpp"
#include "hcsc/learning.hpp"
#include "hcsc/model.hpp"

namespace py = pybind11;
using namespace hcsc;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

SignalTensor to_signal(const FloatArray& arr) {
  if (arr.ndim() != 3) {
    throw FormatError("shape-error", "signal arrays must be (c, h, w), got " +
                                         std::to_string(arr.ndim()) + " dims");
  }
  SignalTensor t(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)),
                 static_cast<int>(arr.shape(2)));
  std::copy(arr.data(), arr.data() + t.size(), t.data.begin());
  return t;
}

py::array from_signal(const SignalTensor& t) {
  py::array_t<float> out({t.channels, t.height, t.width});
  std::copy(t.data.begin(), t.data.end(), out.mutable_data());
  return out;
}

FilterBank to_bank(const FloatArray& arr) {
  if (arr.ndim() != 4) {
    throw FormatError("shape-error", "filter arrays must be (out, in, kh, kw)");
  }
  FilterBank f(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)),
               static_cast<int>(arr.shape(2)), static_cast<int>(arr.shape(3)));
  std::copy(arr.data(), arr.data() + f.size(), f.data.begin());
  return f;
}

py::array from_bank(const FilterBank& f) {
  py::array_t<float> out({f.out_channels, f.in_channels, f.kernel_h, f.kernel_w});
  std::copy(f.data.begin(), f.data.end(), out.mutable_data());
  return out;
}

FistaSettings make_fista(float step, int iters, bool record) {
  FistaSettings s;
  s.step = step;
  s.iters = iters;
  s.record_objective = record;
  return s;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "hierarchical convolutional sparse coding core";

  py::register_exception<Error>(m, "HcscError");

  py::class_<LayerConfig>(m, "LayerConfig")
      .def(py::init<>())
      .def_readwrite("scale_channels", &LayerConfig::scale_channels)
      .def_readwrite("detail_channels", &LayerConfig::detail_channels)
      .def_readwrite("kernel_h", &LayerConfig::kernel_h)
      .def_readwrite("kernel_w", &LayerConfig::kernel_w)
      .def_readwrite("lambda_", &LayerConfig::lambda)
      .def_readwrite("gamma", &LayerConfig::gamma)
      .def_readwrite("scale_filter_trainable", &LayerConfig::scale_filter_trainable);

  py::class_<HierarchicalModel>(m, "HierarchicalModel")
      .def_property_readonly("depth", &HierarchicalModel::depth)
      .def_readonly("tied", &HierarchicalModel::tied)
      .def_readonly("input_channels", &HierarchicalModel::input_channels)
      .def("filters_a",
           [](const HierarchicalModel& model, int ell) {
             return from_bank(*model.A.at(ell - 1));
           },
           py::arg("layer"))
      .def("filters_b",
           [](const HierarchicalModel& model, int ell) {
             return from_bank(*model.B.at(ell - 1));
           },
           py::arg("layer"))
      .def("trainable_params",
           [](const HierarchicalModel& model) { return trainable_param_count(model); });

  py::class_<Encoding>(m, "Encoding")
      .def_property_readonly("x",
                             [](const Encoding& e) {
                               py::list out;
                               for (const auto& t : e.x) out.append(from_signal(t));
                               return out;
                             })
      .def_property_readonly("u",
                             [](const Encoding& e) {
                               py::list out;
                               for (const auto& t : e.u) out.append(from_signal(t));
                               return out;
                             })
      .def_readonly("layer_residual_mse", &Encoding::layer_residual_mse)
      .def_readonly("objective_trace", &Encoding::objective_trace);

  py::class_<LogisticModel>(m, "LogisticModel")
      .def_readonly("classes", &LogisticModel::classes)
      .def_readonly("dim", &LogisticModel::dim);

  m.def("conv_full",
        [](const FloatArray& filters, const FloatArray& signal) {
          return from_signal(conv_full(to_bank(filters), to_signal(signal)));
        },
        py::arg("filters"), py::arg("signal"),
        "Full multi-channel convolution; output (out, h+kh-1, w+kw-1).");

  m.def("corr_valid",
        [](const FloatArray& signal, const FloatArray& filters) {
          return from_signal(corr_valid(to_signal(signal), to_bank(filters)));
        },
        py::arg("signal"), py::arg("filters"),
        "Valid correlation; the exact adjoint of conv_full.");

  m.def("soft_threshold",
        [](const FloatArray& signal, float threshold) {
          return from_signal(soft_threshold(to_signal(signal), threshold));
        },
        py::arg("signal"), py::arg("threshold"));

  m.def("init_model",
        [](int layers, bool tied, int detail_channels, int kernel, float lambda,
           float gamma, std::uint64_t seed) {
          LayerConfig layer;
          layer.detail_channels = detail_channels;
          layer.kernel_h = layer.kernel_w = kernel;
          layer.lambda = lambda;
          layer.gamma = gamma;
          return init_model(std::vector<LayerConfig>(layers, layer), tied, 1, seed);
        },
        py::arg("layers") = 3, py::arg("tied") = true,
        py::arg("detail_channels") = 32, py::arg("kernel") = 5,
        py::arg("lambda_") = 1.0f, py::arg("gamma") = 0.01f, py::arg("seed") = 0);

  m.def("encode",
        [](const HierarchicalModel& model, const FloatArray& image, float step,
           int iters) {
          return encode(model, to_signal(image), make_fista(step, iters, false));
        },
        py::arg("model"), py::arg("image"), py::arg("step") = 0.01f,
        py::arg("iters") = 40);

  m.def("reconstruct",
        [](const HierarchicalModel& model, const Encoding& enc, int from_layer) {
          return from_signal(reconstruct(model, enc, from_layer));
        },
        py::arg("model"), py::arg("encoding"), py::arg("from_layer"));

  m.def("train",
        [](HierarchicalModel& model, const std::vector<FloatArray>& images,
           int epochs, int batch_size, float dict_lr, float step, int iters,
           std::uint64_t seed, int threads) {
          std::vector<SignalTensor> tensors;
          tensors.reserve(images.size());
          for (const auto& arr : images) tensors.push_back(to_signal(arr));
          TrainSettings s;
          s.epochs = epochs;
          s.batch_size = batch_size;
          s.dict_lr = dict_lr;
          s.fista = make_fista(step, iters, false);
          s.seed = seed;
          s.threads = threads;
          TrainHistory h = train(model, tensors, s);
          py::list out;
          for (const auto& e : h.epochs) {
            py::dict d;
            d["recon_rel_err"] = e.recon_rel_err;
            d["layer_objective_mean"] = e.layer_objective_mean;
            out.append(d);
          }
          return out;
        },
        py::arg("model"), py::arg("images"), py::arg("epochs") = 5,
        py::arg("batch_size") = 32, py::arg("dict_lr") = 0.05f,
        py::arg("step") = 0.01f, py::arg("iters") = 40, py::arg("seed") = 0,
        py::arg("threads") = 0);

  m.def("featurize",
        [](const Encoding& enc, bool all_scales) {
          FeatureVector f = featurize(enc, all_scales);
          py::array_t<float> out({static_cast<py::ssize_t>(f.values.size())});
          std::copy(f.values.begin(), f.values.end(), out.mutable_data());
          return out;
        },
        py::arg("encoding"), py::arg("all_scales") = false);

  m.def("fit_classifier",
        [](const std::vector<FloatArray>& features, const std::vector<int>& labels,
           int classes, float lr, float momentum, float lr_decay, int epochs,
           int batch_size, std::uint64_t seed) {
          std::vector<FeatureVector> fv(features.size());
          for (std::size_t i = 0; i < features.size(); ++i) {
            const auto& arr = features[i];
            fv[i].values.assign(arr.data(), arr.data() + arr.size());
            fv[i].layout.entries.push_back(
                {"u1", 1, 1, static_cast<int>(arr.size())});
          }
          FitSettings s;
          s.lr = lr;
          s.momentum = momentum;
          s.lr_decay = lr_decay;
          s.epochs = epochs;
          s.batch_size = batch_size;
          s.seed = seed;
          return fit(fv, labels, classes, s);
        },
        py::arg("features"), py::arg("labels"), py::arg("classes"),
        py::arg("lr") = 0.05f, py::arg("momentum") = 0.9f,
        py::arg("lr_decay") = 0.05f, py::arg("epochs") = 100,
        py::arg("batch_size") = 128, py::arg("seed") = 0);

  m.def("predict",
        [](const LogisticModel& clf, const std::vector<FloatArray>& features) {
          std::vector<FeatureVector> fv(features.size());
          for (std::size_t i = 0; i < features.size(); ++i) {
            const auto& arr = features[i];
            fv[i].values.assign(arr.data(), arr.data() + arr.size());
            fv[i].layout.entries.push_back(
                {"u1", 1, 1, static_cast<int>(arr.size())});
          }
          return predict(clf, fv);
        },
        py::arg("classifier"), py::arg("features"));

  m.def("load_dataset",
        [](const std::string& images, const std::string& labels) {
          Dataset ds = load_dataset(images, labels, "py");
          py::list imgs;
          for (const auto& t : ds.images) imgs.append(from_signal(t));
          return py::make_tuple(imgs, ds.labels);
        },
        py::arg("images_path"), py::arg("labels_path"));

  m.def("save_checkpoint",
        [](const std::string& path, const HierarchicalModel& model,
           std::uint64_t seed) {
          CheckpointData data;
          data.model = model;
          data.seed = seed;
          save_checkpoint(path, data);
        },
        py::arg("path"), py::arg("model"), py::arg("seed") = 0);

  m.def("load_checkpoint",
        [](const std::string& path) { return load_checkpoint(path).model; },
        py::arg("path"));

  m.def("export_montage",
        [](const std::vector<FloatArray>& tensors, int cols,
           const std::string& path) {
          std::vector<SignalTensor> ts;
          ts.reserve(tensors.size());
          for (const auto& arr : tensors) ts.push_back(to_signal(arr));
          export_montage(ts, cols, path);
        },
        py::arg("tensors"), py::arg("cols"), py::arg("path"));
}
