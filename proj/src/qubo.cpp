#include "qroute/qubo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "qroute/error.hpp"
#include "text.hpp"

namespace qroute {

QuboProblem::QuboProblem(std::size_t dim) : dim_(dim) {}

void QuboProblem::add_term(std::size_t i, std::size_t j, double value) {
  if (i >= dim_ || j >= dim_)
    throw InvalidInput("QUBO index (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range for dim " +
                       std::to_string(dim_));
  if (value == 0.0) return;
  const Key key{std::min(i, j), std::max(i, j)};
  auto [it, inserted] = coeffs_.try_emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0.0) coeffs_.erase(it);
  }
}

double QuboProblem::coefficient(std::size_t i, std::size_t j) const {
  const auto it = coeffs_.find({std::min(i, j), std::max(i, j)});
  return it == coeffs_.end() ? 0.0 : it->second;
}

double QuboProblem::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [k, v] : coeffs_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<QuboTerm> QuboProblem::terms() const {
  std::vector<QuboTerm> out;
  out.reserve(coeffs_.size());
  for (const auto& [k, v] : coeffs_) out.push_back({k.first, k.second, v});
  return out;
}

std::vector<double> QuboProblem::dense() const {
  std::vector<double> out(dim_ * dim_, 0.0);
  for (const auto& [k, v] : coeffs_) out[k.first * dim_ + k.second] = v;
  return out;
}

void QuboProblem::set_label(std::size_t i, std::string label) {
  if (i >= dim_) throw InvalidInput("label index out of range");
  if (labels_.empty()) labels_.resize(dim_);
  labels_[i] = std::move(label);
}

double QuboProblem::evaluate(std::span<const std::uint8_t> bits) const {
  if (bits.size() != dim_)
    throw InvalidInput("bit vector has length " + std::to_string(bits.size()) + ", QUBO has dim " +
                       std::to_string(dim_));
  double e = 0.0;
  for (const auto& [k, v] : coeffs_) {
    if (bits[k.first] && bits[k.second]) e += v;
  }
  return e;
}

Sample make_sample(const QuboProblem& q, Bits bits) {
  Sample s;
  s.energy = q.evaluate(bits);
  s.total_energy = s.energy + q.offset();
  s.bits = std::move(bits);
  return s;
}

ClampResult clamp(const QuboProblem& q, const std::map<std::size_t, std::uint8_t>& fixed) {
  for (const auto& [idx, bit] : fixed) {
    if (idx >= q.dim()) throw InvalidInput("clamped index " + std::to_string(idx) + " out of range");
    if (bit > 1) throw InvalidInput("clamped value must be 0 or 1");
  }

  ClampResult out;
  std::vector<std::size_t> position(q.dim(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < q.dim(); ++i) {
    if (!fixed.count(i)) {
      position[i] = out.free_vars.size();
      out.free_vars.push_back(i);
    }
  }
  const auto is_free = [&](std::size_t i) { return position[i] != static_cast<std::size_t>(-1); };
  const auto value = [&](std::size_t i) { return fixed.at(i); };

  out.sub = QuboProblem(out.free_vars.size());
  out.sub.add_offset(q.offset());
  for (const auto& [k, v] : q.coefficients()) {
    const auto [i, j] = k;
    const bool fi = is_free(i), fj = is_free(j);
    if (fi && fj) {
      out.sub.add_term(position[i], position[j], v);
    } else if (fi) {
      if (value(j)) out.sub.add_term(position[i], position[i], v);
    } else if (fj) {
      if (value(i)) out.sub.add_term(position[j], position[j], v);
    } else if (value(i) && value(j)) {
      out.base_energy += v;
    }
  }
  if (q.has_labels()) {
    for (std::size_t k = 0; k < out.free_vars.size(); ++k) out.sub.set_label(k, q.labels()[out.free_vars[k]]);
  }
  return out;
}

QuboProblem relabel(const QuboProblem& q, std::span<const std::size_t> perm) {
  if (perm.size() != q.dim()) throw InvalidInput("permutation size mismatch");
  QuboProblem out(q.dim());
  out.add_offset(q.offset());
  for (const auto& [k, v] : q.coefficients()) out.add_term(perm[k.first], perm[k.second], v);
  if (q.has_labels()) {
    for (std::size_t i = 0; i < q.dim(); ++i) out.set_label(perm[i], q.labels()[i]);
  }
  return out;
}

std::string dump_qubo(const QuboProblem& q) {
  std::string out;
  out += "dim " + std::to_string(q.dim()) + "\n";
  out += "offset " + text::format_real(q.offset()) + "\n";
  out += "terms " + std::to_string(q.num_terms()) + "\n";
  if (q.has_labels()) {
    for (std::size_t i = 0; i < q.dim(); ++i) out += "label " + std::to_string(i) + " " + q.labels()[i] + "\n";
  }
  for (const auto& [k, v] : q.coefficients()) {
    out += std::to_string(k.first) + " " + std::to_string(k.second) + " " + text::format_real(v) + "\n";
  }
  return out;
}

QuboProblem parse_qubo_dump(std::string_view text) {
  QuboProblem q;
  bool have_dim = false;
  double offset = 0.0;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) -> InvalidInput {
    return InvalidInput("QUBO dump line " + std::to_string(line_no) + ": " + why);
  };
  auto to_index = [&](std::string_view s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw fail("bad index '" + std::string(s) + "'");
    return v;
  };
  auto to_real = [&](std::string_view s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw fail("bad number '" + std::string(s) + "'");
    return v;
  };
  for (auto raw : text::split_lines(text)) {
    ++line_no;
    const auto words = text::split_ws(text::trim(raw));
    if (words.empty()) continue;
    if (words[0] == "dim" && words.size() == 2) {
      q = QuboProblem(to_index(words[1]));
      have_dim = true;
    } else if (!have_dim) {
      throw fail("expected 'dim N' first");
    } else if (words[0] == "offset" && words.size() == 2) {
      offset = to_real(words[1]);
    } else if (words[0] == "terms" && words.size() == 2) {
      to_index(words[1]);
    } else if (words[0] == "label" && (words.size() == 2 || words.size() == 3)) {
      const std::size_t i = to_index(words[1]);
      if (i >= q.dim()) throw fail("label index out of range");
      q.set_label(i, words.size() == 3 ? std::string(words[2]) : std::string());
    } else if (words.size() == 3) {
      q.add_term(to_index(words[0]), to_index(words[1]), to_real(words[2]));
    } else {
      throw fail("unrecognised line");
    }
  }
  if (!have_dim) throw InvalidInput("QUBO dump has no 'dim' line");
  q.add_offset(offset);
  return q;
}

CompiledQubo::CompiledQubo(const QuboProblem& q) : linear_(q.dim(), 0.0), offset_(q.offset()) {
  std::vector<std::size_t> degree(q.dim(), 0);
  for (const auto& [k, v] : q.coefficients()) {
    max_abs_ = std::max(max_abs_, std::abs(v));
    if (k.first == k.second) {
      linear_[k.first] = v;
    } else {
      ++degree[k.first];
      ++degree[k.second];
    }
  }
  row_start_.assign(q.dim() + 1, 0);
  for (std::size_t i = 0; i < q.dim(); ++i) row_start_[i + 1] = row_start_[i] + degree[i];
  adjacency_.resize(row_start_.back());
  std::vector<std::size_t> fill(row_start_.begin(), row_start_.end() - 1);
  for (const auto& [k, v] : q.coefficients()) {
    if (k.first == k.second) continue;
    adjacency_[fill[k.first]++] = {static_cast<std::uint32_t>(k.second), v};
    adjacency_[fill[k.second]++] = {static_cast<std::uint32_t>(k.first), v};
  }
}

double CompiledQubo::evaluate(std::span<const std::uint8_t> bits) const {
  double e = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!bits[i]) continue;
    e += linear_[i];
    for (const Neighbor& nb : neighbors(i)) {
      if (nb.var > i && bits[nb.var]) e += nb.weight;
    }
  }
  return e;
}

double CompiledQubo::flip_delta(std::span<const std::uint8_t> bits, std::size_t i) const {
  double field = linear_[i];
  for (const Neighbor& nb : neighbors(i)) {
    if (bits[nb.var]) field += nb.weight;
  }
  return bits[i] ? -field : field;
}

}  // namespace qroute
