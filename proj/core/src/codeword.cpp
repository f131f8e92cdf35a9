#include "rackmsr/codeword.hpp"

#include <stdexcept>

namespace rackmsr {

Codeword::Codeword(int rows, int cols, const FieldCtxPtr& ctx)
    : rows_(rows), cols_(cols), ctx_(ctx) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("empty codeword shape");
  if (!ctx) throw std::invalid_argument("null field context");
  cells_.assign(static_cast<std::size_t>(rows) * cols, ctx->zero());
}

std::vector<FieldElement> Codeword::column(int c) const {
  std::vector<FieldElement> col;
  col.reserve(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) col.push_back(at(i, c));
  return col;
}

void Codeword::set_column(int c, const std::vector<FieldElement>& col) {
  if (static_cast<int>(col.size()) != rows_)
    throw std::invalid_argument("column length mismatch");
  for (int i = 0; i < rows_; ++i) at(i, c) = col[static_cast<std::size_t>(i)];
}

bool Codeword::operator==(const Codeword& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i] != o.cells_[i]) return false;
  return true;
}

long long RepairTranscript::downloaded_elements() const {
  long long total = 0;
  for (const auto& [group, syms] : downloaded) total += static_cast<long long>(syms.size());
  return total;
}

long long RepairTranscript::downloaded_from(int group) const {
  auto it = downloaded.find(group);
  return it == downloaded.end() ? 0 : static_cast<long long>(it->second.size());
}

long long RepairTranscript::accessed_entries() const {
  long long total = 0;
  for (const auto& [node, rows] : accessed_rows) total += static_cast<long long>(rows.size());
  return total;
}

}  // namespace rackmsr
