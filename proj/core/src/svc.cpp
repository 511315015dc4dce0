#include <cmath>

#include "models_impl.hpp"
#include "newstense/error.hpp"

namespace newstense::impl {

namespace {

// Applies fn(col, value) over every stored entry of one row.
template <typename Fn>
void for_each_entry(const FeatureMatrix& x, size_t row, Fn&& fn) {
  if (!x.sparse_rows.empty())
    for (const auto& [col, v] : x.sparse_rows[row]) fn(col, static_cast<double>(v));
  if (!x.dense_rows.empty()) {
    const auto& d = x.dense_rows[row];
    for (size_t j = 0; j < d.size(); ++j)
      fn(x.sparse_width + static_cast<uint32_t>(j), static_cast<double>(d[j]));
  }
}

}  // namespace

// L2-regularized hinge loss, J(w, b) = (lambda/2)||w||^2 + mean_i hinge_i,
// minimized by batch subgradient descent with Armijo backtracking. Every
// recorded objective value comes from an accepted (strictly improving) step,
// so the trace is monotone by construction. The bias is not regularized.
SvcModel fit_svc(const FeatureMatrix& x, const std::vector<Label>& y, double lambda, double tol,
                 uint32_t max_epochs) {
  if (lambda < 0.0) throw Error("fit_svc: lambda must be non-negative");
  const size_t n = x.rows();
  const uint32_t d = x.cols();

  std::vector<double> ys(n);
  for (size_t i = 0; i < n; ++i) ys[i] = y[i] == Label::Future ? 1.0 : -1.0;

  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<double> wx(n, 0.0);  // cached w . x_i, bias excluded

  auto hinge_mean = [&](const std::vector<double>& wxv, double bias) {
    double h = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double m = ys[i] * (wxv[i] + bias);
      if (m < 1.0) h += 1.0 - m;
    }
    return h / static_cast<double>(n);
  };

  double w2 = 0.0;  // ||w||^2, refreshed exactly every epoch
  double objective = hinge_mean(wx, b);  // w = 0: pure hinge
  SvcModel model;
  model.objective_trace.push_back(objective);

  std::vector<double> g(d), gx(n), wx_try(n);
  double eta_start = 1.0;
  uint32_t accepted_steps = 0;

  for (uint32_t epoch = 0; epoch < max_epochs; ++epoch) {
    w2 = 0.0;
    for (uint32_t j = 0; j < d; ++j) {
      w2 += w[j] * w[j];
      g[j] = lambda * w[j];
    }
    double gb = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
      if (ys[i] * (wx[i] + b) < 1.0) {
        const double scale = ys[i] * inv_n;
        for_each_entry(x, i, [&](uint32_t col, double v) { g[col] -= scale * v; });
        gb -= scale;
      }
    }

    double gw2 = 0.0, wdotg = 0.0;
    for (uint32_t j = 0; j < d; ++j) {
      gw2 += g[j] * g[j];
      wdotg += w[j] * g[j];
    }
    const double gnorm2 = gw2 + gb * gb;
    if (gnorm2 <= 1e-24) break;  // flat: nothing to descend

    std::fill(gx.begin(), gx.end(), 0.0);
    for (size_t i = 0; i < n; ++i)
      for_each_entry(x, i, [&](uint32_t col, double v) { gx[i] += g[col] * v; });

    double eta = eta_start;
    bool accepted = false;
    double objective_try = objective;
    while (eta > 1e-14) {
      for (size_t i = 0; i < n; ++i) wx_try[i] = wx[i] - eta * gx[i];
      const double reg = 0.5 * lambda * (w2 - 2.0 * eta * wdotg + eta * eta * gw2);
      objective_try = reg + hinge_mean(wx_try, b - eta * gb);
      if (objective_try <= objective - 1e-4 * eta * gnorm2) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // no improving step along the subgradient

    for (uint32_t j = 0; j < d; ++j) w[j] -= eta * g[j];
    b -= eta * gb;
    wx.swap(wx_try);
    ++accepted_steps;
    model.objective_trace.push_back(objective_try);
    eta_start = std::min(eta * 2.0, 1e6);

    const bool converged = std::abs(objective - objective_try) <= tol * std::max(1.0, objective);
    objective = objective_try;
    if (converged) break;
  }

  model.weights.resize(d);
  for (uint32_t j = 0; j < d; ++j) model.weights[j] = static_cast<float>(w[j]);
  model.bias = static_cast<float>(b);
  model.epochs_run = accepted_steps;
  model.final_objective = objective;
  return model;
}

}  // namespace newstense::impl
