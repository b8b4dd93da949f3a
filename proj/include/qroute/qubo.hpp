#pragma once

// Upper-triangular QUBO storage, exact energy evaluation and variable
// clamping. Energies follow min x^T Q x with Q stored as (i <= j) cells;
// a constant offset carries whatever the expansion of squared penalties
// left behind.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qroute {

using Bits = std::vector<std::uint8_t>;

struct QuboTerm {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
};

class QuboProblem {
 public:
  using Key = std::pair<std::size_t, std::size_t>;

  QuboProblem() = default;
  explicit QuboProblem(std::size_t dim);

  std::size_t dim() const { return dim_; }
  double offset() const { return offset_; }
  void add_offset(double value) { offset_ += value; }

  // Accumulates into cell (min(i,j), max(i,j)); a cell that sums to zero is
  // erased. Throws InvalidInput on an out-of-range index.
  void add_term(std::size_t i, std::size_t j, double value);
  double coefficient(std::size_t i, std::size_t j) const;
  const std::map<Key, double>& coefficients() const { return coeffs_; }
  std::size_t num_terms() const { return coeffs_.size(); }
  double max_abs_coefficient() const;

  // Sparse export, ordered by (i, j).
  std::vector<QuboTerm> terms() const;
  // Row-major dim x dim upper-triangular matrix.
  std::vector<double> dense() const;

  void set_label(std::size_t i, std::string label);
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_labels() const { return !labels_.empty(); }

  // sum over cells of coeff * x_i * x_j; the offset is not included.
  double evaluate(std::span<const std::uint8_t> bits) const;
  double total_energy(std::span<const std::uint8_t> bits) const { return evaluate(bits) + offset_; }

 private:
  std::size_t dim_ = 0;
  double offset_ = 0.0;
  std::map<Key, double> coeffs_;
  std::vector<std::string> labels_;
};

struct Sample {
  Bits bits;
  double energy = 0.0;        // matrix energy
  double total_energy = 0.0;  // energy + offset
};

Sample make_sample(const QuboProblem& q, Bits bits);

struct ClampResult {
  // QUBO over the free variables, in ascending original-index order. It
  // keeps the parent's offset.
  QuboProblem sub;
  // Energy of the fixed variables among themselves.
  double base_energy = 0.0;
  // free_vars[k] is the original index of sub variable k.
  std::vector<std::size_t> free_vars;
};

// For every assignment y of the free variables:
//   sub.evaluate(y) + base_energy + q.offset() == q.total_energy(combined)
ClampResult clamp(const QuboProblem& q, const std::map<std::size_t, std::uint8_t>& fixed);

// Variables sharing a variable permutation: result var perm[i] == q var i.
QuboProblem relabel(const QuboProblem& q, std::span<const std::size_t> perm);

// Plain-text dump: header (dim, offset, labels) and one "i j coeff" line per
// stored cell. Bit-exact for equal inputs.
std::string dump_qubo(const QuboProblem& q);
// Inverse of dump_qubo. Throws InvalidInput.
QuboProblem parse_qubo_dump(std::string_view text);

// Adjacency form used by the local search backends.
class CompiledQubo {
 public:
  struct Neighbor {
    std::uint32_t var;
    double weight;
  };

  explicit CompiledQubo(const QuboProblem& q);

  std::size_t dim() const { return linear_.size(); }
  double offset() const { return offset_; }
  double linear(std::size_t i) const { return linear_[i]; }
  std::span<const Neighbor> neighbors(std::size_t i) const {
    return {adjacency_.data() + row_start_[i], adjacency_.data() + row_start_[i + 1]};
  }
  double max_abs_coefficient() const { return max_abs_; }

  double evaluate(std::span<const std::uint8_t> bits) const;
  // Energy change from flipping bit i.
  double flip_delta(std::span<const std::uint8_t> bits, std::size_t i) const;

 private:
  std::vector<double> linear_;
  std::vector<std::size_t> row_start_;
  std::vector<Neighbor> adjacency_;
  double offset_ = 0.0;
  double max_abs_ = 0.0;
};

}  // namespace qroute
