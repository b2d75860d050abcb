#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tautring/driver.hpp"
#include "tautring/house.hpp"
#include "tautring/pushforward.hpp"
#include "tautring/version.hpp"

namespace py = pybind11;
using namespace tautring;

namespace {

RunOptions options(int genus, const std::string& mode, int max_codim, const std::string& policy, unsigned threads,
                   std::uint64_t seed, const std::string& cache_dir, double time_limit) {
  RunOptions o;
  o.genus = genus;
  o.mode = parse_mode(mode);
  o.max_codim = max_codim;
  o.policy = parse_policy(policy);
  o.threads = threads;
  o.prime_seed = seed;
  o.cache_dir = cache_dir;
  o.time_limit = time_limit;
  return o;
}

template <class Fn>
std::string with_polynomial(int genus, const std::string& text, Fn fn) {
  auto ctx = AlgebraContext::make(genus);
  return ctx->to_string(fn(*ctx, ctx->parse_polynomial(text)));
}

}  // namespace

PYBIND11_MODULE(_tautring, m) {
  m.doc() = "Tautological rings of curves and their Jacobians";
  m.attr("engine_version") = kEngineVersion;
  m.attr("default_seed") = kDefaultPrimeSeed;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);

  m.def(
      "analysis_json",
      [](int genus, const std::string& mode, int max_codim, const std::string& policy, unsigned threads,
         std::uint64_t seed, const std::string& cache_dir, double time_limit) {
        auto o = options(genus, mode, max_codim, policy, threads, seed, cache_dir, time_limit);
        py::gil_scoped_release release;
        return report_json(run_analysis(o));
      },
      py::arg("genus"), py::arg("mode") = "ttilde", py::arg("max_codim") = -1, py::arg("policy") = "auto",
      py::arg("threads") = 1, py::arg("seed") = kDefaultPrimeSeed, py::arg("cache_dir") = "",
      py::arg("time_limit") = 0.0);

  m.def(
      "sympow_json",
      [](int genus, int n, const std::string& policy, unsigned threads, std::uint64_t seed,
         const std::string& cache_dir) {
        auto o = options(genus, "ttilde", -1, policy, threads, seed, cache_dir, 0);
        py::gil_scoped_release release;
        return sympow_json(run_sympow(o, n));
      },
      py::arg("genus"), py::arg("n"), py::arg("policy") = "auto", py::arg("threads") = 1,
      py::arg("seed") = kDefaultPrimeSeed, py::arg("cache_dir") = "");

  m.def(
      "house",
      [](int genus, int dim, const std::string& format) {
        auto spec = HouseSpec::make(genus, dim < 0 ? HouseSpec::default_dim(genus) : dim);
        if (format != "text" && format != "svg") throw InputError("house format is text or svg");
        return house_render(spec, nullptr, format == "svg" ? HouseFormat::Svg : HouseFormat::Text);
      },
      py::arg("genus"), py::arg("dim") = -1, py::arg("format") = "text");

  m.def("apply_E", [](int g, const std::string& p) { return with_polynomial(g, p, [](auto& c, auto q) { return apply_E(c, q); }); });
  m.def("apply_F", [](int g, const std::string& p) { return with_polynomial(g, p, [](auto& c, auto q) { return apply_F(c, q); }); });
  m.def("apply_H", [](int g, const std::string& p) { return with_polynomial(g, p, [](auto& c, auto q) { return apply_H(c, q); }); });
  m.def("p_to_kappa", [](int g, const std::string& p) {
    auto ctx = AlgebraContext::make(g);
    return p_to_kappa(*ctx, ctx->parse_polynomial(p)).to_string();
  });
}
