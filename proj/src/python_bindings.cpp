#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "timescales/bessel.hpp"
#include "timescales/estimators.hpp"
#include "timescales/fisher.hpp"
#include "timescales/gaussianization.hpp"
#include "timescales/increment_law.hpp"
#include "timescales/montecarlo.hpp"
#include "timescales/nonhomogeneous.hpp"

namespace py = pybind11;

namespace ts = timescales;

namespace {

ts::IncrementSeries make_series(std::vector<int> values, double horizon, double step) {
  ts::IncrementSeries series;
  series.values = std::move(values);
  series.scheme = {horizon, step};
  ts::validate(series.scheme);
  return series;
}

}  // namespace

PYBIND11_MODULE(_timescales, m) {
  m.doc() =
      "Exact likelihood, Fisher information across sampling scales, and "
      "estimators for a discretely observed compound Poisson process with "
      "symmetric unit jumps";

  py::enum_<ts::Regime>(m, "Regime")
      .value("Microscopic", ts::Regime::Microscopic)
      .value("Intermediate", ts::Regime::Intermediate)
      .value("Macroscopic", ts::Regime::Macroscopic);

  py::enum_<ts::estimators::Method>(m, "Method")
      .value("QV", ts::estimators::Method::QV)
      .value("OneStep", ts::estimators::Method::OneStep)
      .value("MLE", ts::estimators::Method::MLE);

  // bessel kernel
  m.def("log_bessel_i", &ts::bessel::log_bessel_i, py::arg("nu"), py::arg("x"));
  m.def("bessel_ratio", &ts::bessel::bessel_ratio, py::arg("nu"), py::arg("x"));
  m.def("bessel_ratio2", &ts::bessel::bessel_ratio2, py::arg("nu"), py::arg("x"));

  // increment law
  m.def("pmf", &ts::pmf, py::arg("x"), py::arg("k"));
  m.def("log_pmf_table", &ts::log_pmf_table, py::arg("x"), py::arg("k_max"));
  m.def("walk_kernel", &ts::walk_kernel, py::arg("m"), py::arg("k"));
  m.def("pmf_oracle", &ts::pmf_oracle, py::arg("x"), py::arg("k"), py::arg("m_max"));
  m.def(
      "sample_increments",
      [](double theta, double horizon, double step, std::uint64_t seed) {
        return ts::sample_increments({theta}, {horizon, step}, seed).values;
      },
      py::arg("theta"), py::arg("horizon"), py::arg("step"), py::arg("seed"));
  m.def(
      "score",
      [](double theta, double step, int k) { return ts::score({theta}, step, k); },
      py::arg("theta"), py::arg("step"), py::arg("k"));
  m.def(
      "log_pmf_hessian",
      [](double theta, double step, int k) {
        return ts::log_pmf_hessian({theta}, step, k);
      },
      py::arg("theta"), py::arg("step"), py::arg("k"));
  m.def(
      "central_moments",
      [](double x) {
        const ts::Moments mom = ts::central_moments(x);
        return std::make_pair(mom.second, mom.fourth);
      },
      py::arg("x"));
  m.def("qv_summand_variance", &ts::qv_summand_variance, py::arg("x"));

  // fisher information
  m.def("psi", &ts::fisher::psi, py::arg("x"));
  m.def(
      "total_information",
      [](double theta, double horizon, double step) {
        return ts::fisher::total_information({theta}, {horizon, step});
      },
      py::arg("theta"), py::arg("horizon"), py::arg("step"));
  m.def(
      "limit_information",
      [](ts::Regime regime, double theta, double horizon, double step) {
        return ts::fisher::limit_information(regime, {theta}, {horizon, step});
      },
      py::arg("regime"), py::arg("theta"), py::arg("horizon"), py::arg("step"));
  m.def("deficiency_ratio", &ts::fisher::deficiency_ratio, py::arg("x"));
  m.def(
      "max_deficiency",
      [](double x_lo, double x_hi, double tol) {
        const auto res = ts::fisher::max_deficiency(x_lo, x_hi, tol);
        return py::make_tuple(res.x_star, res.ratio_star, res.boundary);
      },
      py::arg("x_lo"), py::arg("x_hi"), py::arg("tol") = 1e-4,
      "returns (x_star, ratio_star, boundary)");

  // estimators
  py::class_<ts::estimators::EstimateResult>(m, "EstimateResult")
      .def_readonly("value", &ts::estimators::EstimateResult::value)
      .def_readonly("avar", &ts::estimators::EstimateResult::avar)
      .def_readonly("stderr", &ts::estimators::EstimateResult::stderr_)
      .def_readonly("method", &ts::estimators::EstimateResult::method)
      .def_readonly("converged", &ts::estimators::EstimateResult::converged)
      .def_readonly("iterations", &ts::estimators::EstimateResult::iterations)
      .def_readonly("degenerate", &ts::estimators::EstimateResult::degenerate)
      .def_readonly("fallback", &ts::estimators::EstimateResult::fallback)
      .def("to_json",
           [](const ts::estimators::EstimateResult& res) { return to_json(res); })
      .def("__repr__", [](const ts::estimators::EstimateResult& res) {
        return to_json(res);
      });
  m.def(
      "qv_estimate",
      [](std::vector<int> values, double horizon, double step) {
        return ts::estimators::qv_estimate(make_series(std::move(values), horizon, step));
      },
      py::arg("values"), py::arg("horizon"), py::arg("step"));
  m.def(
      "one_step_estimate",
      [](std::vector<int> values, double horizon, double step) {
        return ts::estimators::one_step_estimate(
            make_series(std::move(values), horizon, step));
      },
      py::arg("values"), py::arg("horizon"), py::arg("step"));
  m.def(
      "mle_estimate",
      [](std::vector<int> values, double horizon, double step,
         std::optional<std::pair<double, double>> bracket) {
        return ts::estimators::mle_estimate(make_series(std::move(values), horizon, step),
                                            bracket);
      },
      py::arg("values"), py::arg("horizon"), py::arg("step"),
      py::arg("bracket") = std::nullopt);

  // gaussian comparison
  m.def(
      "l2_distance_direct",
      [](double theta, double delta) {
        const auto res = ts::gaussianization::l2_distance_direct(theta, delta);
        return py::make_tuple(res.value, res.small_x);
      },
      py::arg("theta"), py::arg("delta"), "returns (value, small_x_flag)");
  m.def(
      "l2_distance_spectral",
      [](double theta, double delta) {
        const auto res = ts::gaussianization::l2_distance_spectral(theta, delta);
        return py::make_tuple(res.value, res.small_x);
      },
      py::arg("theta"), py::arg("delta"), "returns (value, small_x_flag)");

  // non-homogeneous intensity
  m.def(
      "cumulative_intensity",
      [](const std::string& model, double theta, double t, double horizon) {
        return ts::nonhomogeneous::cumulative_intensity(
            ts::nonhomogeneous::builtin_intensity(model), theta, t, horizon);
      },
      py::arg("model"), py::arg("theta"), py::arg("t"), py::arg("horizon"));
  m.def(
      "sample_increments_nh",
      [](const std::string& model, double theta, double horizon, double step,
         std::uint64_t seed) {
        return ts::nonhomogeneous::sample_increments_nh(
                   ts::nonhomogeneous::builtin_intensity(model), theta,
                   {horizon, step}, seed)
            .values;
      },
      py::arg("model"), py::arg("theta"), py::arg("horizon"), py::arg("step"),
      py::arg("seed"));
  m.def(
      "info_nonhomog",
      [](ts::Regime regime, const std::string& model, double theta, double horizon,
         double step) {
        return ts::nonhomogeneous::info_nonhomog(
            regime, ts::nonhomogeneous::builtin_intensity(model), theta,
            {horizon, step});
      },
      py::arg("regime"), py::arg("model"), py::arg("theta"), py::arg("horizon"),
      py::arg("step"));

  // monte carlo studies
  py::class_<ts::montecarlo::StudyRow>(m, "StudyRow")
      .def_readonly("delta", &ts::montecarlo::StudyRow::delta)
      .def_readonly("estimator", &ts::montecarlo::StudyRow::estimator)
      .def_readonly("empirical_variance", &ts::montecarlo::StudyRow::empirical_variance)
      .def_readonly("theoretical_inverse_info",
                    &ts::montecarlo::StudyRow::theoretical_inverse_info)
      .def_readonly("qv_theoretical_variance",
                    &ts::montecarlo::StudyRow::qv_theoretical_variance)
      .def_readonly("ks_statistic", &ts::montecarlo::StudyRow::ks_statistic)
      .def_readonly("failures", &ts::montecarlo::StudyRow::failures)
      .def_readonly("flagged", &ts::montecarlo::StudyRow::flagged);
  m.def(
      "run_variance_study",
      [](double theta, std::vector<double> deltas, long long n_per_scheme, int replicas,
         std::uint64_t seed, std::vector<ts::estimators::Method> methods, int threads) {
        ts::montecarlo::ExperimentConfig config;
        config.theta = theta;
        config.delta_grid = std::move(deltas);
        config.n_per_scheme = n_per_scheme;
        config.replicas = replicas;
        config.seed = seed;
        if (!methods.empty()) config.methods = std::move(methods);
        config.threads = threads;
        return ts::montecarlo::run_variance_study(config);
      },
      py::arg("theta"), py::arg("deltas"), py::arg("n_per_scheme") = 10000,
      py::arg("replicas") = 1000, py::arg("seed") = 0,
      py::arg("methods") = std::vector<ts::estimators::Method>{},
      py::arg("threads") = 0);
  m.def(
      "normality_diagnostic",
      [](std::vector<double> samples, double center, double scale) {
        return ts::montecarlo::normality_diagnostic(samples, center, scale);
      },
      py::arg("samples"), py::arg("center"), py::arg("scale"));
}
