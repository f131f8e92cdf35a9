#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rackmsr/code_c1.hpp"
#include "rackmsr/code_c3.hpp"
#include "rackmsr/code_oa.hpp"
#include "rackmsr/code_rs.hpp"
#include "rackmsr/codeword.hpp"

namespace rackmsr::io {

enum class Family { c1, c2, c3, rs };

std::string family_name(Family f);
Family family_from(const std::string& name);  // case-insensitive

/// A built code of any family behind one handle.  Exactly one of the spec
/// pointers is set; the accessors below dispatch on the family tag so callers
/// can treat the four constructions uniformly.
struct CodeHandle {
  Family family = Family::c1;
  std::shared_ptr<const c1::C1Spec> c1;
  std::shared_ptr<const oa::OASpec> c2;
  std::shared_ptr<const c3::C3Spec> c3;
  std::shared_ptr<const rs::RSSpec> rs;

  const FieldCtxPtr& field() const;
  int rows() const;        // sub-packetization l (1 for the scalar family)
  int nodes() const;       // n
  int data_nodes() const;  // k
  int parities() const { return nodes() - data_nodes(); }
  /// Rack geometry: the homogeneous family counts each node as its own rack.
  int racks() const;
  int rack_size() const;
  int helper_groups() const;  // racks (or nodes) contacted per repair
  int stages() const;         // helper_groups - floor(k / rack_size) + 1
  bool degenerate() const;    // stages == 1: repair is a plain download
  /// The builder parameters, in a stable order, for reports and file headers.
  std::vector<std::pair<std::string, long>> params() const;

  Codeword encode(const Codeword& data) const;
  bool parity_check(const Codeword& cw) const;
  Codeword erasure_decode(const Codeword& cw, const std::vector<int>& erased) const;
  /// Helper-group labels a repair of `failed` may contact (host group excluded).
  std::vector<int> helper_universe(int failed) const;
  RepairResult repair(const Codeword& cw, int failed,
                      const std::vector<int>& helpers) const;
};

/// Builds a code from named parameters.  Keys per family:
///   C1/C3: racks, rack_size, k, helpers        C2: n, k, d
///   RS:    q, racks, rack_size, k, helpers
/// `field` overrides the automatic field choice for C1/C2/C3; the scalar
/// family derives its extension tower and rejects overrides.
CodeHandle build_code(Family f, const std::map<std::string, long>& params,
                      FieldCtxPtr field = nullptr);

/// Spec JSON: every field and multiplier choice needed to rebuild the code
/// bit-exactly, plus a derived-parameter block for human readers.
std::string spec_to_json(const CodeHandle& h);
CodeHandle spec_from_json(const std::string& text);
void save_spec(const CodeHandle& h, const std::string& path);
CodeHandle load_spec(const std::string& path);

struct LoadedCodeword {
  CodeHandle code;
  Codeword word;                  // erased cells read back as zero
  std::vector<int> erased_nodes;  // columns containing any '*'
};

/// Text format: one header line naming the family, its parameters, the field
/// and the multiplier choices, then rows() lines of nodes() decimal element
/// encodings.  Cells of erased columns are written as '*'.
void write_codeword(std::ostream& out, const CodeHandle& h, const Codeword& cw,
                    const std::set<int>& erased = {});
LoadedCodeword read_codeword(std::istream& in);
void write_codeword_file(const std::string& path, const CodeHandle& h,
                         const Codeword& cw, const std::set<int>& erased = {});
LoadedCodeword read_codeword_file(const std::string& path);

}  // namespace rackmsr::io
