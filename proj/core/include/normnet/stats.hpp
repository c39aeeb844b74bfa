#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace normnet {

// Sample Pearson correlation. Requires equal lengths >= 3 and nonzero
// variance in both arguments (NumericError otherwise).
double pearson(std::span<const double> x, std::span<const double> y);

// Two-sided p-value of a correlation under the t distribution with n-2
// degrees of freedom.
double pearson_p_value(double r, std::size_t n);

// Per column: subtract the mean, divide by the sample standard deviation.
// A constant column raises NumericError naming it (by `names` entry when
// provided, by index otherwise).
std::vector<std::vector<double>> zscore(const std::vector<std::vector<double>>& columns,
                                        const std::vector<std::string>& names = {});

enum class ModelForm { linear, logistic_curve };

struct RegressionResult {
  ModelForm form = ModelForm::linear;
  std::vector<double> coefficients;  // one per predictor column
  std::vector<double> std_errors;
  std::vector<double> p_values;      // two-sided t tests, n-k-1 df
  double intercept = 0.0;
  double intercept_std_error = 0.0;
  double intercept_p_value = 1.0;
  // Only meaningful for the logistic curve y = amplitude * sigmoid(eta).
  double amplitude = 0.0;
  double amplitude_std_error = 0.0;
  double r_squared = 0.0;
  double mse = 0.0;  // mean of squared residuals
};

// Ordinary least squares of target on the predictor columns plus an
// intercept. Requires rows > columns + 1 and a full-rank design
// (NumericError "singular design" otherwise).
RegressionResult ols(const std::vector<std::vector<double>>& columns,
                     std::span<const double> target);

// Damped Gauss-Newton fit of y = A * sigmoid(b0 + x.b). Throws
// ConvergenceError when the iteration cap is exhausted without settling.
RegressionResult logistic_curve_fit(const std::vector<std::vector<double>>& columns,
                                    std::span<const double> target, int max_iter = 200);

struct ModelComparison {
  std::optional<RegressionResult> linear;
  std::optional<RegressionResult> logistic;
  std::optional<ModelForm> winner;  // lower MSE; linear wins exact ties
  std::string linear_error;
  std::string logistic_error;
};

// Fits both response models to the same data. Per-model failures are
// reported in the corresponding error string; throws NumericError only if
// neither model can be fit.
ModelComparison compare_models(const std::vector<std::vector<double>>& columns,
                               std::span<const double> target);

struct PowerLawFit {
  double alpha = 0.0;      // slope of log y on log x
  double std_error = 0.0;
  double log_intercept = 0.0;
};

// OLS on (log x, log y). All values must be positive, >= 3 points.
PowerLawFit powerlaw_fit(std::span<const double> x, std::span<const double> y);

struct AgreementResult {
  double agreement = 0.0;  // raw fraction of matching labels
  double kappa = 0.0;
  std::size_t n_items = 0;
  std::size_t n_categories = 0;
};

// Cohen's kappa from two equal-length label lists (>= 2 items). Undefined
// when both raters are constant and identical (NumericError).
AgreementResult cohens_kappa(std::span<const std::string> rater_a,
                             std::span<const std::string> rater_b);

}  // namespace normnet
