// temporal.hpp
// Year-weight learning for the matrix synthesis step. The target-year data
// matrix is modeled as a linear combination of the three preceding years'
// matrices; the 3-vector of weights comes from a closed-form least-squares
// fit on flattened matrices, then a fixed number of proximally regularized
// refinements on progressively older year windows.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "rankins/errors.hpp"
#include "rankins/featspace.hpp"
#include "rankins/util.hpp"

namespace rankins {

using WeightVector = std::array<double, 3>;

// Row r = (i, j) in row-major order holds the length-3 tube fiber of entry
// (i, j) across the lag matrices; z holds the target matrix entries.
struct FlattenedDesign {
  std::vector<std::array<double, 3>> X;
  std::vector<double> z;

  std::size_t rows() const { return X.size(); }
};

struct TemporalConfig {
  std::size_t iterations = 2;           // u
  std::vector<double> lambdas = {200.0};
  // Regularize every refinement toward the initial weights instead of the
  // previous iterate (the alternative update order some callers expect).
  bool anchor_initial = false;

  double lambda_for(std::size_t l) const {  // l is 1-based
    if (lambdas.empty()) return 200.0;
    return lambdas[std::min(l - 1, lambdas.size() - 1)];
  }
};

inline FlattenedDesign flatten(const DataMatrix& target,
                               const DataMatrix& lag1, const DataMatrix& lag2,
                               const DataMatrix& lag3) {
  if (!target.same_shape(lag1) || !target.same_shape(lag2) ||
      !target.same_shape(lag3)) {
    throw ShapeError("flatten: matrices of years " +
                     std::to_string(target.year) + ".." +
                     std::to_string(lag3.year) + " disagree in shape");
  }
  FlattenedDesign design;
  const std::size_t n = target.rows * target.cols;
  design.X.resize(n);
  design.z.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    design.X[r] = {lag1.data[r], lag2.data[r], lag3.data[r]};
    design.z[r] = target.data[r];
  }
  return design;
}

// Inverse bookkeeping of flatten for one column of X (or for z).
inline DataMatrix unflatten(const std::vector<double>& values,
                            const std::string& venue, int year,
                            std::size_t rows, std::size_t cols) {
  if (values.size() != rows * cols) {
    throw ShapeError("unflatten: value count does not match shape");
  }
  DataMatrix mat;
  mat.venue_id = venue;
  mat.year = year;
  mat.rows = rows;
  mat.cols = cols;
  mat.data = values;
  return mat;
}

namespace detail {

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat3 gram(const FlattenedDesign& d) {
  Mat3 g{};
  for (const auto& row : d.X) {
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b) g[a][b] += row[a] * row[b];
    }
  }
  g[1][0] = g[0][1];
  g[2][0] = g[0][2];
  g[2][1] = g[1][2];
  return g;
}

inline std::array<double, 3> xt_z(const FlattenedDesign& d) {
  std::array<double, 3> b{};
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (int a = 0; a < 3; ++a) b[a] += d.X[r][a] * d.z[r];
  }
  return b;
}

inline double one_norm(const Mat3& m) {
  double best = 0.0;
  for (int j = 0; j < 3; ++j) {
    double col = std::abs(m[0][j]) + std::abs(m[1][j]) + std::abs(m[2][j]);
    best = std::max(best, col);
  }
  return best;
}

// Gauss-Jordan with partial pivoting; returns the inverse, or reports a
// zero pivot through `singular`.
inline Mat3 invert(Mat3 a, bool& singular) {
  Mat3 inv{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  singular = false;
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) {
      singular = true;
      return inv;
    }
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double scale = a[col][col];
    for (int j = 0; j < 3; ++j) {
      a[col][j] /= scale;
      inv[col][j] /= scale;
    }
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 3; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

inline WeightVector mat_vec(const Mat3& m, const std::array<double, 3>& v) {
  WeightVector out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  }
  return out;
}

// Solves (gram + lambda I) w = rhs. When require_condition is set (the
// unregularized path), a zero pivot or a 1-norm condition estimate above
// 1e12 raises SingularSystemError.
inline WeightVector solve_regularized(Mat3 g, std::array<double, 3> rhs,
                                      double lambda, bool require_condition) {
  for (int i = 0; i < 3; ++i) g[i][i] += lambda;
  bool singular = false;
  Mat3 inv = invert(g, singular);
  if (require_condition) {
    if (singular) {
      throw SingularSystemError(
          "normal equations are singular (rank-deficient Gram matrix)",
          std::numeric_limits<double>::infinity());
    }
    const double cond = one_norm(g) * one_norm(inv);
    if (!(cond <= 1e12)) {
      throw SingularSystemError(
          "normal equations too ill-conditioned: condition estimate " +
              format_double(cond),
          cond);
    }
  } else if (singular) {
    throw SingularSystemError("regularized system unexpectedly singular",
                              std::numeric_limits<double>::infinity());
  }
  return mat_vec(inv, rhs);
}

}  // namespace detail

// Unique minimizer of ||z - X w||^2 via the normal equations.
inline WeightVector initial_weights(const FlattenedDesign& design) {
  return detail::solve_regularized(detail::gram(design), detail::xt_z(design),
                                   0.0, /*require_condition=*/true);
}

// Unique minimizer of ||z - X w||^2 + lambda ||w_prev - w||^2, i.e.
// w = (X^T X + lambda I)^{-1} (X^T z + lambda w_prev).
inline WeightVector refine_weights(const WeightVector& w_prev,
                                   const FlattenedDesign& design,
                                   double lambda) {
  if (lambda < 0.0) throw ArgumentError("lambda must be >= 0");
  if (lambda == 0.0) return initial_weights(design);
  auto rhs = detail::xt_z(design);
  for (int i = 0; i < 3; ++i) rhs[i] += lambda * w_prev[i];
  return detail::solve_regularized(detail::gram(design), rhs, lambda,
                                   /*require_condition=*/false);
}

// Full weight learning for one venue. matrices must cover
// train_target_year .. train_target_year - 3 - u. When the initial
// closed-form system is singular (e.g. identical lag matrices), the initial
// weights fall back to a lightly regularized solve around the uniform
// vector (1/3, 1/3, 1/3).
inline WeightVector learn_weights(const std::map<int, DataMatrix>& matrices,
                                  int train_target_year,
                                  const TemporalConfig& config) {
  const int oldest =
      train_target_year - 3 - static_cast<int>(config.iterations);
  std::string missing;
  for (int y = oldest; y <= train_target_year; ++y) {
    if (!matrices.count(y)) missing += (missing.empty() ? "" : ", ") +
                                       std::to_string(y);
  }
  if (!missing.empty()) {
    throw MissingHistoryError(
        "weight learning needs data matrices for years " +
        std::to_string(oldest) + ".." + std::to_string(train_target_year) +
        "; missing: " + missing);
  }

  auto design_for = [&](int target_year) {
    return flatten(matrices.at(target_year), matrices.at(target_year - 1),
                   matrices.at(target_year - 2), matrices.at(target_year - 3));
  };

  WeightVector w;
  const FlattenedDesign design0 = design_for(train_target_year);
  try {
    w = initial_weights(design0);
  } catch (const SingularSystemError&) {
    w = refine_weights({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, design0, 1e-6);
  }
  const WeightVector w0 = w;
  for (std::size_t l = 1; l <= config.iterations; ++l) {
    const FlattenedDesign design_l =
        design_for(train_target_year - static_cast<int>(l));
    w = refine_weights(config.anchor_initial ? w0 : w, design_l,
                       config.lambda_for(l));
  }
  return w;
}

// M_hat = w1 M(y-1) + w2 M(y-2) + w3 M(y-3), element-wise.
inline DataMatrix synthesize_matrix(const WeightVector& w,
                                    const DataMatrix& lag1,
                                    const DataMatrix& lag2,
                                    const DataMatrix& lag3) {
  if (!lag1.same_shape(lag2) || !lag1.same_shape(lag3)) {
    throw ShapeError("synthesize_matrix: lag matrices disagree in shape");
  }
  DataMatrix out;
  out.venue_id = lag1.venue_id;
  out.year = lag1.year + 1;
  out.rows = lag1.rows;
  out.cols = lag1.cols;
  out.data.resize(lag1.data.size());
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] =
        w[0] * lag1.data[i] + w[1] * lag2.data[i] + w[2] * lag3.data[i];
  }
  return out;
}

// TSV audit log of learned weights: [venue_id, w1, w2, w3, iterations,
// lambdas] with lambdas ";"-joined.
inline void export_weight_audit(
    const std::vector<std::pair<std::string, WeightVector>>& weights,
    const TemporalConfig& config, const std::string& path) {
  TsvWriter w(path);
  std::string lambdas;
  for (std::size_t l = 1; l <= std::max<std::size_t>(config.iterations, 1);
       ++l) {
    if (l > 1) lambdas += ';';
    lambdas += format_double(config.lambda_for(l));
  }
  for (const auto& [venue, wv] : weights) {
    w.row({venue, format_double(wv[0]), format_double(wv[1]),
           format_double(wv[2]), std::to_string(config.iterations), lambdas});
  }
}

}  // namespace rankins
