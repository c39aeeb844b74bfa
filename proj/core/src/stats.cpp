#include "normnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "normnet/error.hpp"

namespace normnet {

namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Dense symmetric positive-definite solve; small systems only.
class Cholesky {
 public:
  explicit Cholesky(std::vector<std::vector<double>> a) : l_(std::move(a)), n_(l_.size()) {
    double scale = 0.0;
    for (std::size_t i = 0; i < n_; ++i) scale = std::max(scale, std::abs(l_[i][i]));
    if (scale == 0.0) scale = 1.0;
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t i = j; i < n_; ++i) {
        double sum = l_[i][j];
        for (std::size_t k = 0; k < j; ++k) sum -= l_[i][k] * l_[j][k];
        if (i == j) {
          if (sum <= scale * 1e-12) {
            throw NumericError("singular design: column " + std::to_string(j) +
                               " is linearly dependent");
          }
          l_[j][j] = std::sqrt(sum);
        } else {
          l_[i][j] = sum / l_[j][j];
        }
      }
    }
  }

  std::vector<double> solve(std::span<const double> b) const {
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < i; ++k) x[i] -= l_[i][k] * x[k];
      x[i] /= l_[i][i];
    }
    for (std::size_t i = n_; i-- > 0;) {
      for (std::size_t k = i + 1; k < n_; ++k) x[i] -= l_[k][i] * x[k];
      x[i] /= l_[i][i];
    }
    return x;
  }

  // Diagonal of the inverse.
  std::vector<double> inverse_diagonal() const {
    std::vector<double> diag(n_);
    std::vector<double> e(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      std::fill(e.begin(), e.end(), 0.0);
      e[j] = 1.0;
      diag[j] = solve(e)[j];
    }
    return diag;
  }

 private:
  std::vector<std::vector<double>> l_;
  std::size_t n_;
};

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double two_sided_t_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

// Design matrix with a leading intercept column.
std::vector<std::vector<double>> with_intercept_rows(
    const std::vector<std::vector<double>>& columns, std::size_t n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(columns.size() + 1, 1.0));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) rows[i][j + 1] = columns[j][i];
  }
  return rows;
}

void check_design(const std::vector<std::vector<double>>& columns,
                  std::span<const double> target) {
  if (target.empty()) throw ArgumentError("regression needs a nonempty target");
  for (const auto& col : columns) {
    if (col.size() != target.size()) {
      throw ArgumentError("predictor column length does not match target length");
    }
  }
}

struct FitStats {
  double rss = 0.0;
  double tss = 0.0;
};

FitStats residual_stats(std::span<const double> target, std::span<const double> fitted) {
  FitStats f;
  const double ybar = mean_of(target);
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double r = target[i] - fitted[i];
    f.rss += r * r;
    f.tss += (target[i] - ybar) * (target[i] - ybar);
  }
  return f;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("pearson: length mismatch");
  if (x.size() < 3) throw ArgumentError("pearson: needs at least 3 points");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw NumericError("pearson: undefined for zero-variance input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson_p_value(double r, std::size_t n) {
  if (n < 3) throw ArgumentError("pearson p-value needs n >= 3");
  const double denom = 1.0 - r * r;
  if (denom <= 0.0) return 0.0;
  const double t = r * std::sqrt((static_cast<double>(n) - 2.0) / denom);
  return two_sided_t_p(t, static_cast<double>(n) - 2.0);
}

std::vector<std::vector<double>> zscore(const std::vector<std::vector<double>>& columns,
                                        const std::vector<std::string>& names) {
  std::vector<std::vector<double>> out;
  out.reserve(columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto& col = columns[j];
    if (col.size() < 2) throw ArgumentError("zscore: column needs at least 2 values");
    const double m = mean_of(col);
    double ss = 0.0;
    for (double v : col) ss += (v - m) * (v - m);
    if (ss == 0.0) {
      const std::string label = j < names.size() ? names[j] : std::to_string(j);
      throw NumericError("zscore: column '" + label + "' is constant");
    }
    const double sd = std::sqrt(ss / static_cast<double>(col.size() - 1));
    std::vector<double> z(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) z[i] = (col[i] - m) / sd;
    out.push_back(std::move(z));
  }
  return out;
}

RegressionResult ols(const std::vector<std::vector<double>>& columns,
                     std::span<const double> target) {
  check_design(columns, target);
  const std::size_t n = target.size();
  const std::size_t p = columns.size() + 1;
  if (n <= p) throw ArgumentError("ols: needs more rows than predictors plus intercept");

  const auto rows = with_intercept_rows(columns, n);
  std::vector<std::vector<double>> xtx(p, std::vector<double>(p, 0.0));
  std::vector<double> xty(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < p; ++a) {
      xty[a] += rows[i][a] * target[i];
      for (std::size_t b = 0; b <= a; ++b) xtx[a][b] += rows[i][a] * rows[i][b];
    }
  }
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) xtx[a][b] = xtx[b][a];
  }

  const Cholesky chol(xtx);
  const std::vector<double> beta = chol.solve(xty);

  std::vector<double> fitted(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < p; ++a) fitted[i] += rows[i][a] * beta[a];
  }
  const FitStats fs = residual_stats(target, fitted);
  const double sigma2 = fs.rss / static_cast<double>(n - p);
  const std::vector<double> inv_diag = chol.inverse_diagonal();

  RegressionResult result;
  result.form = ModelForm::linear;
  result.intercept = beta[0];
  result.intercept_std_error = std::sqrt(std::max(0.0, sigma2 * inv_diag[0]));
  result.intercept_p_value =
      result.intercept_std_error > 0.0
          ? two_sided_t_p(result.intercept / result.intercept_std_error,
                          static_cast<double>(n - p))
          : 0.0;
  for (std::size_t j = 1; j < p; ++j) {
    result.coefficients.push_back(beta[j]);
    const double se = std::sqrt(std::max(0.0, sigma2 * inv_diag[j]));
    result.std_errors.push_back(se);
    result.p_values.push_back(se > 0.0 ? two_sided_t_p(beta[j] / se, static_cast<double>(n - p))
                                       : 0.0);
  }
  result.r_squared = fs.tss > 0.0 ? 1.0 - fs.rss / fs.tss : 1.0;
  result.mse = fs.rss / static_cast<double>(n);
  return result;
}

RegressionResult logistic_curve_fit(const std::vector<std::vector<double>>& columns,
                                    std::span<const double> target, int max_iter) {
  check_design(columns, target);
  const std::size_t n = target.size();
  const std::size_t k = columns.size();
  const std::size_t p = k + 2;  // amplitude, intercept, slopes
  if (n <= p) throw ArgumentError("logistic fit: needs more rows than parameters");

  const double ymax = *std::max_element(target.begin(), target.end());
  const double ymin = *std::min_element(target.begin(), target.end());
  double amplitude = ymax + 0.05 * (ymax - ymin);
  if (!(amplitude > 0.0)) amplitude = 1.0;

  // Linearized start: OLS of logit(y/A) on the predictors.
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = std::clamp(target[i] / amplitude, 1e-6, 1.0 - 1e-6);
    z[i] = std::log(q / (1.0 - q));
  }
  std::vector<double> theta(p, 0.0);  // [A, b0, b1..bk]
  theta[0] = amplitude;
  try {
    const RegressionResult init = ols(columns, z);
    theta[1] = init.intercept;
    for (std::size_t j = 0; j < k; ++j) theta[2 + j] = init.coefficients[j];
  } catch (const Error&) {
    theta[1] = 0.0;  // fall back to a flat curve
  }

  const auto predict = [&](const std::vector<double>& th, std::size_t i) {
    double eta = th[1];
    for (std::size_t j = 0; j < k; ++j) eta += th[2 + j] * columns[j][i];
    return std::pair{th[0] * sigmoid(eta), sigmoid(eta)};
  };
  const auto rss_of = [&](const std::vector<double>& th) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = target[i] - predict(th, i).first;
      rss += r * r;
    }
    return rss;
  };

  double rss = rss_of(theta);
  double lambda = 1e-3;
  std::vector<std::vector<double>> jtj(p, std::vector<double>(p));
  std::vector<double> jtr(p);
  std::vector<double> grad_row(p);
  bool converged = false;

  for (int iter = 0; iter < max_iter && !converged; ++iter) {
    for (auto& row : jtj) std::fill(row.begin(), row.end(), 0.0);
    std::fill(jtr.begin(), jtr.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto [yhat, s] = predict(theta, i);
      const double resid = target[i] - yhat;
      grad_row[0] = s;
      const double ds = theta[0] * s * (1.0 - s);
      grad_row[1] = ds;
      for (std::size_t j = 0; j < k; ++j) grad_row[2 + j] = ds * columns[j][i];
      for (std::size_t a = 0; a < p; ++a) {
        jtr[a] += grad_row[a] * resid;
        for (std::size_t b = 0; b <= a; ++b) jtj[a][b] += grad_row[a] * grad_row[b];
      }
    }
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = a + 1; b < p; ++b) jtj[a][b] = jtj[b][a];
    }

    bool stepped = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      auto damped = jtj;
      for (std::size_t a = 0; a < p; ++a) damped[a][a] += lambda * (1.0 + jtj[a][a]);
      std::vector<double> step;
      try {
        step = Cholesky(damped).solve(jtr);
      } catch (const NumericError&) {
        lambda *= 4.0;
        continue;
      }
      auto candidate = theta;
      for (std::size_t a = 0; a < p; ++a) candidate[a] += step[a];
      const double candidate_rss = rss_of(candidate);
      if (std::isfinite(candidate_rss) && candidate_rss <= rss) {
        if (rss - candidate_rss <= 1e-12 * (candidate_rss + 1e-30)) converged = true;
        theta = std::move(candidate);
        rss = candidate_rss;
        lambda = std::max(lambda * 0.5, 1e-12);
        stepped = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!stepped) converged = true;  // no damping level improves: local minimum
  }

  if (!converged) {
    throw ConvergenceError("logistic fit: no convergence after " + std::to_string(max_iter) +
                               " iterations (rss " + std::to_string(rss) + ")",
                           rss);
  }
  for (double v : theta) {
    if (!std::isfinite(v)) {
      throw ConvergenceError("logistic fit: parameters diverged", rss);
    }
  }

  // Asymptotic covariance at the optimum.
  for (auto& row : jtj) std::fill(row.begin(), row.end(), 0.0);
  std::vector<double> fitted(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [yhat, s] = predict(theta, i);
    fitted[i] = yhat;
    grad_row[0] = s;
    const double ds = theta[0] * s * (1.0 - s);
    grad_row[1] = ds;
    for (std::size_t j = 0; j < k; ++j) grad_row[2 + j] = ds * columns[j][i];
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = 0; b <= a; ++b) jtj[a][b] += grad_row[a] * grad_row[b];
    }
  }
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) jtj[a][b] = jtj[b][a];
  }

  const FitStats fs = residual_stats(target, fitted);
  const double sigma2 = fs.rss / static_cast<double>(n - p);
  std::vector<double> inv_diag(p, 0.0);
  bool have_cov = true;
  try {
    inv_diag = Cholesky(jtj).inverse_diagonal();
  } catch (const NumericError&) {
    have_cov = false;  // flat directions at the optimum; report zero SEs
  }

  RegressionResult result;
  result.form = ModelForm::logistic_curve;
  result.amplitude = theta[0];
  result.intercept = theta[1];
  const double df = static_cast<double>(n - p);
  const auto se_of = [&](std::size_t a) {
    return have_cov ? std::sqrt(std::max(0.0, sigma2 * inv_diag[a])) : 0.0;
  };
  result.amplitude_std_error = se_of(0);
  result.intercept_std_error = se_of(1);
  result.intercept_p_value = result.intercept_std_error > 0.0
                                 ? two_sided_t_p(result.intercept / result.intercept_std_error, df)
                                 : 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    result.coefficients.push_back(theta[2 + j]);
    const double se = se_of(2 + j);
    result.std_errors.push_back(se);
    result.p_values.push_back(se > 0.0 ? two_sided_t_p(theta[2 + j] / se, df) : 1.0);
  }
  result.r_squared = fs.tss > 0.0 ? 1.0 - fs.rss / fs.tss : 1.0;
  result.mse = fs.rss / static_cast<double>(n);
  return result;
}

ModelComparison compare_models(const std::vector<std::vector<double>>& columns,
                               std::span<const double> target) {
  ModelComparison cmp;
  try {
    cmp.linear = ols(columns, target);
  } catch (const Error& e) {
    cmp.linear_error = e.what();
  }
  try {
    cmp.logistic = logistic_curve_fit(columns, target);
  } catch (const Error& e) {
    cmp.logistic_error = e.what();
  }
  if (cmp.linear && cmp.logistic) {
    cmp.winner = cmp.linear->mse <= cmp.logistic->mse ? ModelForm::linear
                                                      : ModelForm::logistic_curve;
  } else if (cmp.linear) {
    cmp.winner = ModelForm::linear;
  } else if (cmp.logistic) {
    cmp.winner = ModelForm::logistic_curve;
  } else {
    throw NumericError("compare_models: both fits failed (linear: " + cmp.linear_error +
                       "; logistic: " + cmp.logistic_error + ")");
  }
  return cmp;
}

PowerLawFit powerlaw_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("powerlaw_fit: length mismatch");
  if (x.size() < 3) throw ArgumentError("powerlaw_fit: needs at least 3 points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw ArgumentError("powerlaw_fit: values must be positive");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = mean_of(lx);
  const double my = mean_of(ly);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw NumericError("powerlaw_fit: all x values identical");
  PowerLawFit fit;
  fit.alpha = sxy / sxx;
  fit.log_intercept = my - fit.alpha * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.log_intercept + fit.alpha * lx[i]);
    rss += r * r;
  }
  fit.std_error = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return fit;
}

AgreementResult cohens_kappa(std::span<const std::string> rater_a,
                             std::span<const std::string> rater_b) {
  if (rater_a.size() != rater_b.size()) throw ArgumentError("cohens_kappa: length mismatch");
  if (rater_a.size() < 2) throw ArgumentError("cohens_kappa: needs at least 2 items");
  const double n = static_cast<double>(rater_a.size());
  std::map<std::string, double> marg_a, marg_b;
  double matches = 0.0;
  for (std::size_t i = 0; i < rater_a.size(); ++i) {
    marg_a[rater_a[i]] += 1.0;
    marg_b[rater_b[i]] += 1.0;
    if (rater_a[i] == rater_b[i]) matches += 1.0;
  }
  std::map<std::string, double> categories = marg_a;
  for (const auto& [label, count] : marg_b) categories[label] += count;

  AgreementResult res;
  res.n_items = rater_a.size();
  res.n_categories = categories.size();
  res.agreement = matches / n;
  double pe = 0.0;
  for (const auto& [label, count_a] : marg_a) {
    auto it = marg_b.find(label);
    if (it != marg_b.end()) pe += (count_a / n) * (it->second / n);
  }
  if (pe >= 1.0) {
    throw NumericError("cohens_kappa: undefined when both raters are constant and identical");
  }
  res.kappa = (res.agreement - pe) / (1.0 - pe);
  return res;
}

}  // namespace normnet
