#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "newstense/features.hpp"

namespace newstense {

// Row-major feature matrix: a sparse n-gram block (columns
// [0, sparse_width)) followed by a dense tail shared by all rows. Either
// block may be empty.
struct FeatureMatrix {
  std::vector<SparseVec> sparse_rows;
  std::vector<std::vector<float>> dense_rows;
  uint32_t sparse_width = 0;

  size_t rows() const { return sparse_rows.empty() ? dense_rows.size() : sparse_rows.size(); }
  uint32_t dense_width() const {
    return dense_rows.empty() ? 0 : static_cast<uint32_t>(dense_rows.front().size());
  }
  uint32_t cols() const { return sparse_width + dense_width(); }

  // Random access; absent sparse entries read as 0.
  float at(size_t row, uint32_t col) const {
    if (col < sparse_width) {
      if (sparse_rows.empty()) return 0.0f;
      const SparseVec& r = sparse_rows[row];
      auto it = std::lower_bound(r.begin(), r.end(), col,
                                 [](const auto& p, uint32_t c) { return p.first < c; });
      return (it != r.end() && it->first == col) ? it->second : 0.0f;
    }
    return dense_rows[row][col - sparse_width];
  }

  // Materializes one column (length = rows()).
  std::vector<float> column(uint32_t col) const {
    std::vector<float> out(rows(), 0.0f);
    if (col < sparse_width) {
      for (size_t i = 0; i < sparse_rows.size(); ++i) {
        for (const auto& [c, v] : sparse_rows[i]) {
          if (c == col) {
            out[i] = v;
            break;
          }
          if (c > col) break;
        }
      }
    } else {
      for (size_t i = 0; i < dense_rows.size(); ++i) out[i] = dense_rows[i][col - sparse_width];
    }
    return out;
  }

  // Row subset in the given order.
  FeatureMatrix gather(const std::vector<uint32_t>& row_ids) const {
    FeatureMatrix out;
    out.sparse_width = sparse_width;
    if (!sparse_rows.empty()) {
      out.sparse_rows.reserve(row_ids.size());
      for (uint32_t r : row_ids) out.sparse_rows.push_back(sparse_rows[r]);
    }
    if (!dense_rows.empty()) {
      out.dense_rows.reserve(row_ids.size());
      for (uint32_t r : row_ids) out.dense_rows.push_back(dense_rows[r]);
    }
    return out;
  }
};

}  // namespace newstense
