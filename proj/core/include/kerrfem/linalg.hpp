#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace kerrfem {

using Vector = std::vector<double>;

/// Marks an index with no counterpart (removed gauge dof, constrained dof).
inline constexpr std::size_t kNoDof = std::numeric_limits<std::size_t>::max();

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed-row real sparse matrix. Column indices are sorted and unique
/// within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), offsets_(rows + 1, 0) {}

  /// Duplicate (i, j) entries are summed. Throws InvalidArgument on an
  /// out-of-range index.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::span<const Triplet> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const std::size_t> col_indices() const { return cols_idx_; }
  std::span<const double> values() const { return values_; }

  /// Entry (i, j), zero when not stored.
  double coeff(std::size_t i, std::size_t j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;
  /// y = A^T x.
  Vector multiply_transpose(std::span<const double> x) const;

  SparseMatrix transposed() const;
  Vector diagonal() const;

  /// Keeps rows/cols whose map entry is not kNoDof, renumbered by the map.
  SparseMatrix submatrix(std::span<const std::size_t> row_map, std::size_t new_rows,
                         std::span<const std::size_t> col_map, std::size_t new_cols) const;

  /// Appends this matrix's entries, scaled and shifted, to a triplet list.
  void append_triplets(std::vector<Triplet>& out, double scale = 1.0, std::size_t row_shift = 0,
                       std::size_t col_shift = 0) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> cols_idx_;
  std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
/// y += a x
void axpy(double a, std::span<const double> x, std::span<double> y);

struct CgResult {
  Vector x;
  int iterations = 0;
  /// Final true residual ||b - A x|| / ||b||.
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. Guarantees
/// ||A x - b|| <= rel_tol ||b|| on return; throws SolverError with kind
/// Breakdown on non-positive curvature and NotConverged after 10 n iterations.
/// `guess` (optional, may be empty) seeds the iteration.
CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, double rel_tol,
                  std::span<const double> guess = {});

struct SaddleSolution {
  Vector u;
  Vector p;
};

/// Solves [[A, B^T], [B, 0]] [u; p] = [f; g] as one sparse system by direct
/// LU factorization. Throws SolverError if the system is singular or the
/// residual exceeds rel_tol relative to ||(f, g)||.
SaddleSolution solve_saddle(const SparseMatrix& a, const SparseMatrix& b, std::span<const double> f,
                            std::span<const double> g, double rel_tol);

/// Gathers entries of `full` at the indices where `map` is not kNoDof.
Vector restrict_vector(std::span<const double> full, std::span<const std::size_t> map,
                       std::size_t compact_size);
/// Scatters a compact vector back; unmapped entries are zero.
Vector extend_vector(std::span<const double> compact, std::span<const std::size_t> map);

}  // namespace kerrfem
