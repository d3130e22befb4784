#include "kerrfem/linalg.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <string>

#include "kerrfem/error.hpp"

namespace kerrfem {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::span<const Triplet> entries) {
  SparseMatrix m(rows, cols);
  for (const Triplet& t : entries)
    if (t.row >= rows || t.col >= cols)
      throw InvalidArgument("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                            ") outside a " + std::to_string(rows) + "x" + std::to_string(cols) +
                            " matrix");

  // Counting sort by row, then sort columns within each row.
  std::vector<std::size_t> count(rows + 1, 0);
  for (const Triplet& t : entries) ++count[t.row + 1];
  for (std::size_t i = 0; i < rows; ++i) count[i + 1] += count[i];
  std::vector<std::pair<std::size_t, double>> buf(entries.size());
  std::vector<std::size_t> fill(count.begin(), count.end() - 1);
  for (const Triplet& t : entries) buf[fill[t.row]++] = {t.col, t.value};

  m.cols_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());
  for (std::size_t i = 0; i < rows; ++i) {
    auto first = buf.begin() + static_cast<std::ptrdiff_t>(count[i]);
    auto last = buf.begin() + static_cast<std::ptrdiff_t>(count[i + 1]);
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!m.cols_idx_.empty() && m.offsets_[i] < m.cols_idx_.size() &&
          m.cols_idx_.back() == it->first)
        m.values_.back() += it->second;
      else {
        m.cols_idx_.push_back(it->first);
        m.values_.push_back(it->second);
      }
    }
    m.offsets_[i + 1] = m.cols_idx_.size();
  }
  return m;
}

double SparseMatrix::coeff(std::size_t i, std::size_t j) const {
  auto first = cols_idx_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
  auto last = cols_idx_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_idx_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) s += values_[k] * x[cols_idx_[k]];
    y[i] = s;
  }
}

Vector SparseMatrix::operator*(std::span<const double> x) const {
  Vector y(rows_);
  multiply(x, y);
  return y;
}

Vector SparseMatrix::multiply_transpose(std::span<const double> x) const {
  Vector y(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) y[cols_idx_[k]] += values_[k] * x[i];
  return y;
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<Triplet> t;
  t.reserve(nonzeros());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) t.push_back({cols_idx_[k], i, values_[k]});
  return from_triplets(cols_, rows_, t);
}

Vector SparseMatrix::diagonal() const {
  Vector d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = coeff(i, i);
  return d;
}

SparseMatrix SparseMatrix::submatrix(std::span<const std::size_t> row_map, std::size_t new_rows,
                                     std::span<const std::size_t> col_map,
                                     std::size_t new_cols) const {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_map[i] == kNoDof) continue;
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      const std::size_t j = col_map[cols_idx_[k]];
      if (j != kNoDof) t.push_back({row_map[i], j, values_[k]});
    }
  }
  return from_triplets(new_rows, new_cols, t);
}

void SparseMatrix::append_triplets(std::vector<Triplet>& out, double scale, std::size_t row_shift,
                                   std::size_t col_shift) const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
      out.push_back({i + row_shift, cols_idx_[k] + col_shift, scale * values_[k]});
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, double rel_tol,
                  std::span<const double> guess) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw InvalidArgument("cg_solve: dimension mismatch");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidArgument("cg_solve: rel_tol must be in (0,1)");

  CgResult res;
  res.x.assign(n, 0.0);
  const double bnorm = norm(b);
  if (bnorm == 0.0) return res;

  Vector inv_diag = a.diagonal();
  for (double& d : inv_diag) {
    if (!(d > 0.0))
      throw SolverError(SolverError::Kind::Breakdown, 1.0,
                        "cg_solve: non-positive diagonal entry, matrix is not SPD");
    d = 1.0 / d;
  }

  Vector r(b.begin(), b.end());
  if (!guess.empty()) {
    res.x.assign(guess.begin(), guess.end());
    Vector ax = a * res.x;
    axpy(-1.0, ax, r);
  }
  auto true_residual = [&] {
    Vector ax = a * res.x;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (b[i] - ax[i]) * (b[i] - ax[i]);
    return std::sqrt(s) / bnorm;
  };

  Vector z(n), p(n), q(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  const int max_iter = static_cast<int>(std::max<std::size_t>(10 * n, 10));
  for (int it = 0; it <= max_iter; ++it) {
    if (norm(r) <= rel_tol * bnorm) {
      // The recursive residual can drift from the true one; confirm.
      const double tr = true_residual();
      if (tr <= rel_tol) {
        res.iterations = it;
        res.relative_residual = tr;
        return res;
      }
      Vector ax = a * res.x;
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
      for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
      p = z;
      rz = dot(r, z);
    }
    if (it == max_iter) break;
    a.multiply(p, q);
    const double curvature = dot(p, q);
    if (!(curvature > 0.0))
      throw SolverError(SolverError::Kind::Breakdown, norm(r) / bnorm,
                        "cg_solve: non-positive curvature p^T A p = " + std::to_string(curvature) +
                            ", matrix is not SPD");
    const double alpha = rz / curvature;
    axpy(alpha, p, res.x);
    axpy(-alpha, q, r);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  const double tr = true_residual();
  throw SolverError(SolverError::Kind::NotConverged, tr,
                    "cg_solve: no convergence after " + std::to_string(max_iter) +
                        " iterations (relative residual " + std::to_string(tr) + ")");
}

SaddleSolution solve_saddle(const SparseMatrix& a, const SparseMatrix& b, std::span<const double> f,
                            std::span<const double> g, double rel_tol) {
  const std::size_t n = a.rows();
  const std::size_t m = b.rows();
  if (a.cols() != n || (m > 0 && b.cols() != n) || f.size() != n || g.size() != m)
    throw InvalidArgument("solve_saddle: dimension mismatch");

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nonzeros() + 2 * b.nonzeros());
  auto push = [&](const SparseMatrix& mat, std::size_t r0, std::size_t c0, bool transpose) {
    const auto off = mat.offsets();
    const auto col = mat.col_indices();
    const auto val = mat.values();
    for (std::size_t i = 0; i < mat.rows(); ++i)
      for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
        const auto r = static_cast<Eigen::Index>(transpose ? col[k] + r0 : i + r0);
        const auto c = static_cast<Eigen::Index>(transpose ? i + c0 : col[k] + c0);
        t.emplace_back(r, c, val[k]);
      }
  };
  push(a, 0, 0, false);
  if (m > 0) {
    push(b, n, 0, false);
    push(b, 0, n, true);
  }
  const auto dim = static_cast<Eigen::Index>(n + m);
  Eigen::SparseMatrix<double> k(dim, dim);
  k.setFromTriplets(t.begin(), t.end());
  k.makeCompressed();

  Eigen::VectorXd rhs(dim);
  for (std::size_t i = 0; i < n; ++i) rhs[static_cast<Eigen::Index>(i)] = f[i];
  for (std::size_t i = 0; i < m; ++i) rhs[static_cast<Eigen::Index>(n + i)] = g[i];

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(k);
  lu.factorize(k);
  if (lu.info() != Eigen::Success)
    throw SolverError(SolverError::Kind::Breakdown, 1.0,
                      "solve_saddle: factorization failed (" + lu.lastErrorMessage() + ")");
  Eigen::VectorXd sol = lu.solve(rhs);
  const double rhs_norm = rhs.norm();
  const double res = (k * sol - rhs).norm();
  if (!std::isfinite(res) || res > rel_tol * std::max(rhs_norm, 1e-300))
    throw SolverError(SolverError::Kind::NotConverged, res / std::max(rhs_norm, 1e-300),
                      "solve_saddle: residual " + std::to_string(res) + " exceeds tolerance");

  SaddleSolution out;
  out.u.assign(sol.data(), sol.data() + n);
  out.p.assign(sol.data() + n, sol.data() + n + m);
  return out;
}

Vector restrict_vector(std::span<const double> full, std::span<const std::size_t> map,
                       std::size_t compact_size) {
  Vector out(compact_size, 0.0);
  for (std::size_t i = 0; i < full.size(); ++i)
    if (map[i] != kNoDof) out[map[i]] = full[i];
  return out;
}

Vector extend_vector(std::span<const double> compact, std::span<const std::size_t> map) {
  Vector out(map.size(), 0.0);
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map[i] != kNoDof) out[i] = compact[map[i]];
  return out;
}

}  // namespace kerrfem
