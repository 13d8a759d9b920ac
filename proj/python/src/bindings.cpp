// Copyright 2026 The dexkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "dexkit/accel_model.hpp"
#include "dexkit/baselines.hpp"
#include "dexkit/device.hpp"
#include "dexkit/quantize.hpp"
#include "dexkit/tensor_io.hpp"

namespace py = pybind11;
using namespace dexkit;

namespace {

template <typename T>
using Array = py::array_t<T, py::array::c_style | py::array::forcecast>;

Shape shape_of(const py::array& a) {
  if (a.ndim() != 3) {
    throw Error(ErrorCode::kShapeError,
                "expected a CxHxW array, got ndim " + std::to_string(a.ndim()));
  }
  return {static_cast<std::uint32_t>(a.shape(0)), static_cast<std::uint32_t>(a.shape(1)),
          static_cast<std::uint32_t>(a.shape(2))};
}

template <typename T>
ImageTensor tensor_from(const py::array& a) {
  const Array<T> c = Array<T>::ensure(a);
  const Shape shape = shape_of(c);
  return ImageTensor(shape, std::vector<T>(c.data(), c.data() + c.size()));
}

// uint8 -> U8, int8 -> Q7, everything else -> F32.
ImageTensor to_tensor(const py::array& a) {
  if (a.dtype().is(py::dtype::of<std::uint8_t>())) return tensor_from<std::uint8_t>(a);
  if (a.dtype().is(py::dtype::of<std::int8_t>())) return tensor_from<std::int8_t>(a);
  return tensor_from<float>(a);
}

py::array to_array(const ImageTensor& t) {
  const std::vector<py::ssize_t> shape{t.channels(), t.height(), t.width()};
  py::array out;
  t.visit([&](auto values) {
    using T = typename decltype(values)::value_type;
    py::array_t<T> a(shape);
    std::memcpy(a.mutable_data(), values.data(), values.size_bytes());
    out = std::move(a);
  });
  return out;
}

Shape shape_arg(const std::vector<std::uint32_t>& v) {
  if (v.size() != 3) throw Error(ErrorCode::kInvalidArgument, "shape needs 3 entries");
  return {v[0], v[1], v[2]};
}

py::dict report_dict(const UtilizationReport& r) {
  py::dict d;
  d["fits"] = r.fits;
  d["bytes_per_channel"] = r.bytes_per_channel;
  d["processors_used"] = r.processors_used;
  d["processor_utilization"] = r.processor_utilization;
  d["info_utilization"] = r.info_utilization;
  d["info_ratio"] = r.info_ratio;
  d["first_layer_params"] = r.first_layer_params;
  d["first_layer_param_delta"] = r.first_layer_param_delta;
  return d;
}

py::dict profile_dict(const DeviceProfile& p) {
  py::dict d;
  d["name"] = p.name;
  d["num_processors"] = p.num_processors;
  d["per_instance_bytes"] = p.per_instance_bytes;
  d["total_data_bytes"] = p.total_data_bytes;
  d["total_weight_bytes"] = p.total_weight_bytes;
  d["per_instance_derived"] = p.per_instance_derived;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of dexkit";
  py::register_exception<Error>(m, "DexkitError", PyExc_ValueError);

  m.def("strategies", [] {
    std::vector<std::string> names;
    for (Strategy s : all_strategies()) names.emplace_back(strategy_name(s));
    return names;
  });

  m.def(
      "transform",
      [](const py::array& image, const std::string& strategy,
         const std::vector<std::uint32_t>& out_shape, std::uint64_t seed,
         std::pair<double, double> rotation_range) {
        ExtensionConfig config;
        config.strategy = parse_strategy(strategy);
        const Shape s = shape_arg(out_shape);
        config.out_channels = s.channels;
        config.out_height = s.height;
        config.out_width = s.width;
        config.seed = seed;
        config.rotation_range_deg = rotation_range;
        const ImageTensor input = to_tensor(image);
        const ImageTensor out = [&] {
          py::gil_scoped_release release;
          return apply_strategy(input, config);
        }();
        return to_array(out);
      },
      py::arg("image"), py::arg("strategy"), py::arg("out_shape"), py::arg("seed") = 0,
      py::arg("rotation_range") = std::pair<double, double>{-30.0, 30.0});

  m.def(
      "normalize",
      [](const py::array& image, std::vector<double> mean, std::vector<double> std) {
        NormalizationSpec spec;
        if (!mean.empty()) spec.mean = std::move(mean);
        if (!std.empty()) spec.std = std::move(std);
        return to_array(normalize(tensor_from<std::uint8_t>(image), spec));
      },
      py::arg("image"), py::arg("mean") = std::vector<double>{},
      py::arg("std") = std::vector<double>{});

  m.def(
      "quantize_q7",
      [](const py::array& image) { return to_array(quantize_q7(tensor_from<float>(image))); },
      py::arg("image"));

  m.def(
      "plan",
      [](const std::vector<std::uint32_t>& shape, const std::string& profile,
         std::optional<std::vector<std::uint32_t>> original, const std::string& strategy,
         std::uint32_t bytes_per_value, std::optional<std::uint32_t> kernel,
         std::uint32_t layer_out) {
        PlanRequest req;
        req.shape = shape_arg(shape);
        req.bytes_per_value = bytes_per_value;
        if (original) req.original = shape_arg(*original);
        req.strategy = parse_strategy(strategy);
        if (kernel) req.layer = LayerSpec{*kernel, layer_out};
        return report_dict(plan(req, find_profile(profile)));
      },
      py::arg("shape"), py::arg("profile") = "max78000", py::arg("original") = py::none(),
      py::arg("strategy") = "dex", py::arg("bytes_per_value") = 1,
      py::arg("kernel") = py::none(), py::arg("layer_out") = 64);

  m.def(
      "profile", [](const std::string& name) { return profile_dict(find_profile(name)); },
      py::arg("name"));

  m.def(
      "write_tensor",
      [](const std::filesystem::path& path, const py::array& t) {
        write_tensor(path, to_tensor(t));
      },
      py::arg("path"), py::arg("tensor"));
  m.def(
      "read_tensor",
      [](const std::filesystem::path& path) { return to_array(read_tensor(path)); },
      py::arg("path"));
}
