#pragma once

#include <map>
#include <set>
#include <vector>

#include "rackmsr/ffield.hpp"

namespace rackmsr {

/// Array codeword: rows x cols grid of field elements.  Column c holds the
/// contents of node c; row indices are the sub-packetization coordinates.
/// Scalar codes use a single row.
class Codeword {
 public:
  Codeword(int rows, int cols, const FieldCtxPtr& ctx);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FieldCtxPtr& ctx() const { return ctx_; }

  FieldElement& at(int row, int col) {
    return cells_[static_cast<std::size_t>(row) * cols_ + col];
  }
  const FieldElement& at(int row, int col) const {
    return cells_[static_cast<std::size_t>(row) * cols_ + col];
  }

  std::vector<FieldElement> column(int c) const;
  void set_column(int c, const std::vector<FieldElement>& col);

  bool operator==(const Codeword& o) const;
  bool operator!=(const Codeword& o) const { return !(*this == o); }

 private:
  int rows_, cols_;
  FieldCtxPtr ctx_;
  std::vector<FieldElement> cells_;
};

/// Record of one repair: what crossed a rack boundary (downloads) and what
/// was read where (access).  Downloads from the host rack's intact nodes are
/// kept separately as local reads; they are free in the cost model.
struct RepairTranscript {
  int failed_node = -1;
  /// Helper groups: rack indices for rack-aware codes, node indices when
  /// every node is its own group.
  std::vector<int> helper_groups;
  /// Symbols crossing the boundary, keyed by helper group.
  std::map<int, std::vector<FieldElement>> downloaded;
  /// Row indices read on each helper node.
  std::map<int, std::set<int>> accessed_rows;
  /// Row indices read on the host rack's intact nodes (free).
  std::map<int, std::set<int>> local_accessed_rows;
  /// Base symbols represented by one downloaded element / one accessed row
  /// entry (1 for array codes over F; the subfield degree for scalar codes).
  long download_weight = 1;
  long access_weight = 1;

  long long downloaded_elements() const;
  long long downloaded_from(int group) const;
  long long downloaded_base_symbols() const {
    return downloaded_elements() * download_weight;
  }
  long long accessed_entries() const;
  long long accessed_base_symbols() const { return accessed_entries() * access_weight; }
};

struct RepairResult {
  std::vector<FieldElement> column;
  RepairTranscript transcript;
};

}  // namespace rackmsr
