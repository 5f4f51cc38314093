// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bertini/field.hpp"

namespace bertini {

/// Scalar operations of F_q on packed values. Models the `FieldOps`
/// interface consumed by Echelon.
struct FqOps {
  using value_type = std::uint32_t;
  const Field* field = nullptr;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(value_type a) const { return a == 0; }
  value_type add(value_type a, value_type b) const { return field->add(a, b); }
  value_type sub(value_type a, value_type b) const { return field->sub(a, b); }
  value_type neg(value_type a) const { return field->neg(a); }
  value_type mul(value_type a, value_type b) const { return field->mul(a, b); }
  value_type inv(value_type a) const { return field->inv(a); }
  value_type from_int(std::int64_t k) const { return field->from_int(k); }
};

/// Incremental row echelon form over any field given by `Ops`. Stored rows
/// have a unit pivot and zeros in the pivot columns of earlier rows.
template <class Ops>
class Echelon {
 public:
  using V = typename Ops::value_type;

  Echelon(Ops ops, std::size_t cols) : ops_(std::move(ops)), cols_(cols), pivot_row_(cols, -1) {}

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return rows_.size(); }
  bool full() const { return rows_.size() == cols_; }
  const Ops& ops() const { return ops_; }

  /// Reduce a row against the stored pivots, in place.
  void reduce(std::vector<V>& row) const {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (ops_.is_zero(row[c])) continue;
      const int pr = pivot_row_[c];
      if (pr < 0) continue;
      const V factor = row[c];
      const auto& prow = rows_[pr];
      for (std::size_t j = c; j < cols_; ++j) {
        if (!ops_.is_zero(prow[j])) row[j] = ops_.sub(row[j], ops_.mul(factor, prow[j]));
      }
    }
  }

  /// Adds a row; returns true when it was independent of the stored rows.
  bool insert(std::vector<V> row) {
    reduce(row);
    std::size_t lead = 0;
    while (lead < cols_ && ops_.is_zero(row[lead])) ++lead;
    if (lead == cols_) return false;
    const V inv = ops_.inv(row[lead]);
    for (std::size_t j = lead; j < cols_; ++j)
      if (!ops_.is_zero(row[j])) row[j] = ops_.mul(row[j], inv);
    pivot_row_[lead] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(row));
    return true;
  }

  bool contains(std::vector<V> row) const {
    reduce(row);
    for (const auto& v : row)
      if (!ops_.is_zero(v)) return false;
    return true;
  }

  /// Reduced row echelon form, rows ordered by pivot column.
  std::vector<std::vector<V>> rref() const {
    std::vector<std::vector<V>> out;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (pivot_row_[c] >= 0) {
        out.push_back(rows_[pivot_row_[c]]);
        pivots.push_back(c);
      }
    }
    for (std::size_t i = out.size(); i-- > 0;) {
      for (std::size_t k = 0; k < i; ++k) {
        const V f = out[k][pivots[i]];
        if (ops_.is_zero(f)) continue;
        for (std::size_t j = pivots[i]; j < cols_; ++j)
          if (!ops_.is_zero(out[i][j])) out[k][j] = ops_.sub(out[k][j], ops_.mul(f, out[i][j]));
      }
    }
    return out;
  }

  std::vector<std::size_t> pivot_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < cols_; ++c)
      if (pivot_row_[c] >= 0) out.push_back(c);
    return out;
  }

  /// Basis of {x : r . x = 0 for every stored row r}.
  std::vector<std::vector<V>> nullspace() const {
    auto R = rref();
    auto piv = pivot_columns();
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::vector<V>> out;
    for (std::size_t free = 0; free < cols_; ++free) {
      if (is_pivot[free]) continue;
      std::vector<V> v(cols_, ops_.zero());
      v[free] = ops_.one();
      for (std::size_t i = 0; i < R.size(); ++i) v[piv[i]] = ops_.neg(R[i][free]);
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  Ops ops_;
  std::size_t cols_;
  std::vector<std::vector<V>> rows_;
  std::vector<int> pivot_row_;
};

/// Row echelon form over F_2 on bit-packed rows.
class Gf2Echelon {
 public:
  explicit Gf2Echelon(std::size_t cols);

  std::size_t cols() const { return cols_; }
  std::size_t words() const { return words_; }
  std::size_t rank() const { return rank_; }
  bool full() const { return rank_ == cols_; }

  /// `row` must point to words() words; it is reduced in place.
  bool insert(std::uint64_t* row);
  bool contains(std::uint64_t* row) const;
  void reduce(std::uint64_t* row) const;
  void clear();
  /// Stored row i (insertion order), words() words.
  const std::uint64_t* row(std::size_t i) const { return store_.data() + i * words_; }

 private:
  std::size_t cols_;
  std::size_t words_;
  std::size_t rank_ = 0;
  std::vector<std::uint64_t> store_;
  std::vector<int> pivot_row_;
};

/// Echelon form over F_q on packed values, using the bit-packed kernel when
/// q == 2.
class FqEchelon {
 public:
  FqEchelon(const Field& field, std::size_t cols);

  const Field& field() const { return *field_; }
  std::size_t cols() const { return cols_; }
  std::size_t rank() const;
  bool full() const { return rank() == cols_; }

  bool insert(std::span<const std::uint32_t> row);
  /// Row given by (column, value) pairs; columns may repeat (values add).
  bool insert_sparse(std::span<const std::pair<std::uint32_t, std::uint32_t>> entries);
  bool contains(std::span<const std::uint32_t> row) const;
  bool contains_sparse(std::span<const std::pair<std::uint32_t, std::uint32_t>> entries) const;

  /// Rows of the reduced row echelon form, ordered by pivot column.
  std::vector<std::vector<std::uint32_t>> rref() const;
  std::vector<std::vector<std::uint32_t>> nullspace() const;

 private:
  const Field* field_;
  std::size_t cols_;
  std::optional<Gf2Echelon> gf2_;
  std::optional<Echelon<FqOps>> gen_;
  mutable std::vector<std::uint64_t> scratch_;

  Echelon<FqOps> dense_copy() const;
};

}  // namespace bertini
