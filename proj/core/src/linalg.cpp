// SPDX-License-Identifier: Apache-2.0
#include "bertini/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

namespace bertini {

Gf2Echelon::Gf2Echelon(std::size_t cols)
    : cols_(cols), words_((cols + 63) / 64), pivot_row_(cols, -1) {
  store_.reserve(words_ * std::min<std::size_t>(cols, 64));
}

void Gf2Echelon::clear() {
  rank_ = 0;
  store_.clear();
  std::fill(pivot_row_.begin(), pivot_row_.end(), -1);
}

void Gf2Echelon::reduce(std::uint64_t* row) const {
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t word = row[w];
    while (word != 0) {
      const int bit = std::countr_zero(word);
      const std::size_t col = w * 64 + static_cast<std::size_t>(bit);
      const int pr = pivot_row_[col];
      if (pr >= 0) {
        const std::uint64_t* prow = store_.data() + static_cast<std::size_t>(pr) * words_;
        for (std::size_t k = w; k < words_; ++k) row[k] ^= prow[k];
        word = row[w] & (~std::uint64_t{0} << bit) & ~(std::uint64_t{1} << bit);
        // pivot rows only carry bits at or after their pivot, so lower bits
        // of this word are untouched; continue scanning above `bit`.
      } else {
        word &= word - 1;
      }
    }
  }
}

bool Gf2Echelon::insert(std::uint64_t* row) {
  if (rank_ == cols_) return false;
  reduce(row);
  for (std::size_t w = 0; w < words_; ++w) {
    if (row[w] == 0) continue;
    const std::size_t col = w * 64 + static_cast<std::size_t>(std::countr_zero(row[w]));
    pivot_row_[col] = static_cast<int>(rank_);
    store_.insert(store_.end(), row, row + words_);
    ++rank_;
    return true;
  }
  return false;
}

bool Gf2Echelon::contains(std::uint64_t* row) const {
  reduce(row);
  for (std::size_t w = 0; w < words_; ++w)
    if (row[w] != 0) return false;
  return true;
}

// ---------------------------------------------------------------- FqEchelon

FqEchelon::FqEchelon(const Field& field, std::size_t cols) : field_(&field), cols_(cols) {
  if (field.order() == 2) {
    gf2_.emplace(cols);
    scratch_.resize(gf2_->words());
  } else {
    gen_.emplace(FqOps{&field}, cols);
  }
}

std::size_t FqEchelon::rank() const { return gf2_ ? gf2_->rank() : gen_->rank(); }

bool FqEchelon::insert(std::span<const std::uint32_t> row) {
  if (gf2_) {
    std::fill(scratch_.begin(), scratch_.end(), 0);
    for (std::size_t c = 0; c < cols_; ++c)
      if (row[c] & 1u) scratch_[c / 64] |= std::uint64_t{1} << (c % 64);
    return gf2_->insert(scratch_.data());
  }
  return gen_->insert(std::vector<std::uint32_t>(row.begin(), row.end()));
}

bool FqEchelon::insert_sparse(std::span<const std::pair<std::uint32_t, std::uint32_t>> entries) {
  if (gf2_) {
    if (gf2_->full()) return false;
    std::fill(scratch_.begin(), scratch_.end(), 0);
    for (const auto& [c, v] : entries)
      if (v & 1u) scratch_[c / 64] ^= std::uint64_t{1} << (c % 64);
    return gf2_->insert(scratch_.data());
  }
  if (gen_->full()) return false;
  std::vector<std::uint32_t> dense(cols_, 0);
  for (const auto& [c, v] : entries) dense[c] = field_->add(dense[c], v);
  return gen_->insert(std::move(dense));
}

bool FqEchelon::contains(std::span<const std::uint32_t> row) const {
  if (gf2_) {
    std::fill(scratch_.begin(), scratch_.end(), 0);
    for (std::size_t c = 0; c < cols_; ++c)
      if (row[c] & 1u) scratch_[c / 64] |= std::uint64_t{1} << (c % 64);
    return gf2_->contains(scratch_.data());
  }
  return gen_->contains(std::vector<std::uint32_t>(row.begin(), row.end()));
}

bool FqEchelon::contains_sparse(std::span<const std::pair<std::uint32_t, std::uint32_t>> entries) const {
  if (gf2_) {
    std::fill(scratch_.begin(), scratch_.end(), 0);
    for (const auto& [c, v] : entries)
      if (v & 1u) scratch_[c / 64] ^= std::uint64_t{1} << (c % 64);
    return gf2_->contains(scratch_.data());
  }
  std::vector<std::uint32_t> dense(cols_, 0);
  for (const auto& [c, v] : entries) dense[c] = field_->add(dense[c], v);
  return gen_->contains(std::move(dense));
}

Echelon<FqOps> FqEchelon::dense_copy() const {
  Echelon<FqOps> e(FqOps{field_}, cols_);
  for (std::size_t i = 0; i < gf2_->rank(); ++i) {
    const std::uint64_t* bits = gf2_->row(i);
    std::vector<std::uint32_t> dense(cols_, 0);
    for (std::size_t c = 0; c < cols_; ++c) dense[c] = (bits[c / 64] >> (c % 64)) & 1u;
    e.insert(std::move(dense));
  }
  return e;
}

std::vector<std::vector<std::uint32_t>> FqEchelon::rref() const {
  if (gen_) return gen_->rref();
  return dense_copy().rref();
}

std::vector<std::vector<std::uint32_t>> FqEchelon::nullspace() const {
  if (gen_) return gen_->nullspace();
  return dense_copy().nullspace();
}

}  // namespace bertini
