#include "rackmsr/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rackmsr/rng.hpp"

namespace rackmsr::harness {

namespace {

using nlohmann::json;

constexpr const char* kCheckOrder[] = {"mds",    "repair", "uniform-download",
                                       "access", "bounds", "optimal-update"};

long long binom(int n, int m) {
  if (m < 0 || m > n) return 0;
  long long out = 1;
  for (int i = 1; i <= m; ++i) {
    out = out * (n - m + i) / i;
    if (out > (1LL << 40)) return 1LL << 40;  // effectively "huge"
  }
  return out;
}

std::vector<std::vector<int>> all_subsets(const std::vector<int>& universe, int m) {
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(universe.size());
  if (m > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::vector<int> pick;
    for (int i : idx) pick.push_back(universe[static_cast<std::size_t>(i)]);
    out.push_back(std::move(pick));
    int i = m - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::vector<std::vector<int>> sample_subsets(const std::vector<int>& universe,
                                             int m, long quota, Rng& rng) {
  const long long total = binom(static_cast<int>(universe.size()), m);
  if (total <= quota) return all_subsets(universe, m);
  if (total <= 100000) {
    auto all = all_subsets(universe, m);
    // Seeded partial shuffle, then keep the head.
    for (std::size_t i = 0; i < static_cast<std::size_t>(quota); ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(all.size() - i));
      std::swap(all[i], all[j]);
    }
    all.resize(static_cast<std::size_t>(quota));
    return all;
  }
  std::set<std::vector<int>> seen;
  std::vector<int> pool = universe;
  while (static_cast<long>(seen.size()) < quota) {
    for (int i = 0; i < m; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    std::vector<int> pick(pool.begin(), pool.begin() + m);
    std::sort(pick.begin(), pick.end());
    seen.insert(std::move(pick));
  }
  return {seen.begin(), seen.end()};
}

/// Sub-packetization in base symbols: the scalar family's array height is its
/// extension degree over the base field, not its single row.
long base_rows(const io::CodeHandle& code) {
  return code.family == io::Family::rs ? code.rs->l : code.rows();
}

int kbar_groups(const io::CodeHandle& code) {
  return code.data_nodes() / code.rack_size();
}

Codeword random_codeword(const io::CodeHandle& code, Rng& rng) {
  Codeword data(code.rows(), code.data_nodes(), code.field());
  for (int i = 0; i < data.rows(); ++i)
    for (int j = 0; j < data.cols(); ++j) data.at(i, j) = code.field()->random(rng);
  return code.encode(data);
}

std::string rational_str(const mpq_class& q) {
  return q.get_den() == 1 ? q.get_num().get_str()
                          : q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string set_label(const std::vector<int>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[static_cast<std::size_t>(i)]);
  }
  return out + "}";
}

json bound_json(const bounds::BoundReport& b) {
  json j;
  j["name"] = b.name;
  json in = json::object();
  for (const auto& [key, val] : b.inputs) in[key] = val;
  j["inputs"] = in;
  j["value"] = rational_str(b.value);
  if (b.measured)
    j["measured"] = *b.measured;
  else
    j["measured"] = nullptr;
  j["attained"] = b.attained();
  return j;
}

std::string fixed_digits(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

bool known_check(const std::string& name) {
  for (const char* c : kCheckOrder)
    if (name == c) return true;
  return false;
}

std::vector<std::string> default_checks(io::Family f) {
  switch (f) {
    case io::Family::c1:
      return {"mds", "repair", "uniform-download", "access", "bounds",
              "optimal-update"};
    case io::Family::c2:
    case io::Family::c3:
      return {"mds", "repair", "uniform-download", "access", "bounds"};
    case io::Family::rs:
      return {"mds", "repair", "uniform-download", "access", "bounds",
              "optimal-update"};
  }
  throw std::logic_error("unreachable family tag");
}

std::string scenario_label(const Scenario& s) {
  return "failed " + std::to_string(s.failed) + ", helpers " + set_label(s.helpers);
}

std::vector<Scenario> enumerate_scenarios(const io::CodeHandle& code,
                                          const ExperimentConfig& cfg) {
  const int n = code.nodes();
  const int t = code.helper_groups();
  const long cap = cfg.sample.value_or(cfg.scenario_ceiling);
  if (cap < n)
    throw std::invalid_argument(
        "scenario budget is smaller than the node count; every failed node "
        "must be covered");
  const long long per_node = binom(static_cast<int>(code.helper_universe(0).size()), t);
  const bool exhaustive = per_node * n <= cap;
  Rng rng(cfg.seed);
  std::vector<Scenario> out;
  for (int failed = 0; failed < n; ++failed) {
    const auto universe = code.helper_universe(failed);
    const long quota = exhaustive ? static_cast<long>(per_node) : cap / n;
    for (auto& helpers : sample_subsets(universe, t, quota, rng))
      out.push_back({failed, std::move(helpers)});
  }
  return out;
}

CheckResult verify_mds(const io::CodeHandle& code, const ExperimentConfig& cfg,
                       const Codeword* fixed, DecodeFn decode) {
  CheckResult res;
  res.name = "mds";
  res.status = "pass";
  if (!decode)
    decode = [&code](const Codeword& cw, const std::vector<int>& erased) {
      return code.erasure_decode(cw, erased);
    };

  std::vector<int> nodes(static_cast<std::size_t>(code.nodes()));
  for (int i = 0; i < code.nodes(); ++i) nodes[static_cast<std::size_t>(i)] = i;
  Rng rng(cfg.seed);
  auto patterns = sample_subsets(nodes, code.parities(), cfg.scenario_ceiling, rng);

  std::vector<Codeword> words;
  if (fixed) {
    if (!code.parity_check(*fixed)) {
      res.status = "fail";
      res.detail = "the supplied codeword fails the parity check";
      return res;
    }
    words.push_back(*fixed);
  } else {
    for (int w = 0; w < cfg.codewords; ++w) words.push_back(random_codeword(code, rng));
  }

  long decoded = 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (const auto& pat : patterns) {
      bool ok = false;
      std::string why;
      try {
        ok = decode(words[w], pat) == words[w];
        if (!ok) why = "decoded output differs from the original";
      } catch (const std::exception& e) {
        why = e.what();
      }
      ++decoded;
      if (!ok) {
        res.status = "fail";
        res.detail = "erasure pattern " + set_label(pat) + " on codeword " +
                     std::to_string(w) + ": " + why;
        res.counts["patterns"] = static_cast<long>(patterns.size());
        res.counts["decodes"] = decoded;
        return res;
      }
    }
  }
  res.counts["patterns"] = static_cast<long>(patterns.size());
  res.counts["codewords"] = static_cast<long>(words.size());
  res.counts["decodes"] = decoded;
  res.detail = "every pattern decoded exactly";
  return res;
}

SweepResult run_repair_sweep(const io::CodeHandle& code, const Codeword& cw,
                             const std::vector<Scenario>& scope) {
  SweepResult out;
  out.scope = scope;
  for (const auto& sc : scope) {
    RepairResult rr = code.repair(cw, sc.failed, sc.helpers);
    if (out.all_exact && rr.column != cw.column(sc.failed)) {
      out.all_exact = false;
      out.first_failure = scenario_label(sc);
    }
    out.transcripts.push_back(std::move(rr.transcript));
  }
  return out;
}

CheckResult summarize_repair(const io::CodeHandle& code, const SweepResult& sweep) {
  CheckResult res;
  res.name = "repair";
  res.status = sweep.all_exact ? "pass" : "fail";
  long long dmin = -1, dmax = -1, amin = -1, amax = -1;
  std::string worst;
  for (std::size_t i = 0; i < sweep.transcripts.size(); ++i) {
    const auto& t = sweep.transcripts[i];
    const long long d = t.downloaded_base_symbols();
    const long long a = t.accessed_base_symbols();
    if (dmin < 0 || d < dmin) dmin = d;
    if (d > dmax) {
      dmax = d;
      worst = scenario_label(sweep.scope[i]);
    }
    if (amin < 0 || a < amin) amin = a;
    if (a > amax) amax = a;
  }
  res.counts["scenarios"] = static_cast<long>(sweep.scope.size());
  res.counts["download_min"] = static_cast<long>(dmin);
  res.counts["download_max"] = static_cast<long>(dmax);
  res.counts["access_min"] = static_cast<long>(amin);
  res.counts["access_max"] = static_cast<long>(amax);
  res.detail = sweep.all_exact
                   ? "every scenario repaired exactly; worst download at " + worst
                   : "repair mismatch at " + sweep.first_failure;
  return res;
}

CheckResult check_uniform_download(const io::CodeHandle& code,
                                   const SweepResult& sweep) {
  CheckResult res;
  res.name = "uniform-download";
  if (kbar_groups(code) < 2) {
    res.status = "skip";
    res.detail =
        "fewer than two whole groups hold data; the uniformity statement "
        "assumes at least two";
    return res;
  }
  res.status = "pass";
  const long expected = base_rows(code) / code.stages();
  res.counts["per_group"] = expected;
  for (std::size_t i = 0; i < sweep.transcripts.size(); ++i) {
    const auto& t = sweep.transcripts[i];
    for (int g : t.helper_groups) {
      const long long got = t.downloaded_from(g) * t.download_weight;
      if (got != expected) {
        res.status = "fail";
        res.detail = "group " + std::to_string(g) + " sent " +
                     std::to_string(got) + " base symbols at " +
                     scenario_label(sweep.scope[i]) + ", expected " +
                     std::to_string(expected);
        return res;
      }
    }
  }
  res.detail = "every helper group sent exactly " + std::to_string(expected) +
               " base symbols";
  return res;
}

CheckResult check_access(const io::CodeHandle& code, const SweepResult& sweep) {
  CheckResult res;
  res.name = "access";
  res.status = "pass";
  const long l = base_rows(code);
  const long s = code.stages() * code.rack_size();
  const mpq_class floor =
      bounds::access_bound(code.helper_groups(), code.rack_size(), l, s);

  long long amin = -1, amax = -1;
  std::map<int, std::set<int>> per_failed;  // rows read, by failed node
  for (std::size_t i = 0; i < sweep.transcripts.size(); ++i) {
    const auto& t = sweep.transcripts[i];
    const long long a = t.accessed_base_symbols();
    if (amin < 0 || a < amin) amin = a;
    if (a > amax) amax = a;
    for (const auto& [node, rows] : t.accessed_rows) {
      auto [it, fresh] = per_failed.emplace(t.failed_node, rows);
      if (!fresh && it->second != rows) {
        res.status = "fail";
        res.detail = "rows read on node " + std::to_string(node) + " at " +
                     scenario_label(sweep.scope[i]) +
                     " differ from other helpers of the same failed node";
        return res;
      }
    }
  }

  bounds::BoundReport rep;
  rep.name = "access";
  rep.inputs = {{"dbar", code.helper_groups()}, {"u", code.rack_size()},
                {"l", l}, {"s", s}};
  rep.value = floor;
  rep.measured = static_cast<long>(amax);
  res.bound_table.push_back(rep);
  res.counts["access_min"] = static_cast<long>(amin);
  res.counts["access_max"] = static_cast<long>(amax);
  const mpq_class ratio = mpq_class(static_cast<long>(amax)) / floor;
  res.detail = "measured " + std::to_string(amax) + " base symbols vs floor " +
               rational_str(floor) + ", ratio " + rational_str(ratio) +
               "; accessed rows depend only on the failed node";
  return res;
}

CheckResult check_bounds(const io::CodeHandle& code, const SweepResult& sweep) {
  CheckResult res;
  res.name = "bounds";
  res.status = "pass";
  const long l = base_rows(code);
  const int u = code.rack_size();
  const int kbar = kbar_groups(code);
  const long k = code.data_nodes();

  long long dmin = -1, dmax = -1, lmax = 0;
  for (const auto& t : sweep.transcripts) {
    const long long d = t.downloaded_base_symbols();
    if (dmin < 0 || d < dmin) dmin = d;
    if (d > dmax) dmax = d;
    long long local = 0;
    for (const auto& [node, rows] : t.local_accessed_rows)
      local += static_cast<long long>(rows.size()) * t.access_weight;
    if (local > lmax) lmax = local;
  }

  {
    bounds::BoundReport rep;
    const bool flat = code.family == io::Family::c2;
    rep.name = flat ? "cutset" : "rack_cutset";
    rep.inputs = {{flat ? "d" : "dbar", code.helper_groups()},
                  {flat ? "k" : "kbar", flat ? k : kbar}, {"l", l}};
    rep.value = flat ? bounds::cutset_bound(code.helper_groups(), k, l)
                     : bounds::rack_cutset_bound(code.helper_groups(), kbar, l);
    rep.measured = static_cast<long>(dmax);
    if (mpq_class(static_cast<long>(dmin)) < rep.value) {
      res.status = "fail";
      res.detail = "a repair downloaded " + std::to_string(dmin) +
                   " base symbols, below the information-flow floor " +
                   rational_str(rep.value) + "; the meter is inconsistent";
    }
    res.bound_table.push_back(rep);
  }

  if (k % u == 0) {
    // The equivalent homogeneous repair contacts d = dbar*u + u - 1 nodes.
    const long d = static_cast<long>(code.helper_groups()) * u + u - 1;
    if (d >= k) {
      const auto [rack_term, local_term] =
          bounds::homogeneous_decomposition(d, k, u, l);
      bounds::BoundReport rep;
      rep.name = "decomposition_rack";
      rep.inputs = {{"d", d}, {"k", k}, {"u", u}, {"l", l}};
      rep.value = rack_term;
      rep.measured = static_cast<long>(dmax);
      res.bound_table.push_back(rep);
      bounds::BoundReport loc;
      loc.name = "decomposition_local";
      loc.inputs = {{"d", d}, {"k", k}, {"u", u}, {"l", l}};
      loc.value = local_term;
      loc.measured = static_cast<long>(lmax);
      res.bound_table.push_back(loc);
    }
  }

  std::string note;
  if (kbar >= 1 && code.racks() > kbar) {
    const double floor_a = bounds::subpacketization_bound(
        code.racks(), kbar, code.helper_groups(), u, bounds::SubpackVariant::a);
    note = "; height " + std::to_string(l) + " vs floor " + fixed_digits(floor_a) +
           " (variant a)";
    if (k % u != 0)
      note += ", stated for whole-group data only - recorded, not enforced";
    else if (static_cast<double>(l) < floor_a) {
      res.status = "fail";
      res.detail = "the array height undercuts the sub-packetization floor";
    }
    res.counts["subpack_floor_milli"] = static_cast<long>(floor_a * 1000);
  }

  res.counts["download_min"] = static_cast<long>(dmin);
  res.counts["download_max"] = static_cast<long>(dmax);
  res.counts["local_max"] = static_cast<long>(lmax);
  if (res.status == "pass")
    res.detail = "downloads meet the information-flow floors" + note;
  return res;
}

CheckResult check_optimal_update(const io::CodeHandle& code,
                                 const ExperimentConfig& cfg) {
  CheckResult res;
  res.name = "optimal-update";
  res.status = "pass";
  const int probes = 100;
  Rng rng(cfg.seed + 0x0bdaULL);
  Codeword data(code.rows(), code.data_nodes(), code.field());
  for (int i = 0; i < data.rows(); ++i)
    for (int j = 0; j < data.cols(); ++j) data.at(i, j) = code.field()->random(rng);
  Codeword cw = code.encode(data);
  for (int p = 0; p < probes; ++p) {
    const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(code.rows())));
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(code.data_nodes())));
    FieldElement fresh = code.field()->random(rng);
    while (fresh == data.at(t, j)) fresh = code.field()->random(rng);
    Codeword data2 = data;
    data2.at(t, j) = fresh;
    const Codeword cw2 = code.encode(data2);
    long parity_changes = 0;
    bool same_row = true;
    long data_changes = 0;
    for (int row = 0; row < cw.rows(); ++row)
      for (int col = 0; col < cw.cols(); ++col) {
        if (cw.at(row, col) == cw2.at(row, col)) continue;
        if (col < code.data_nodes()) {
          ++data_changes;
        } else {
          ++parity_changes;
          if (row != t) same_row = false;
        }
      }
    if (data_changes != 1 || parity_changes != code.parities() || !same_row) {
      res.status = "fail";
      res.detail = "probe (" + std::to_string(t) + "," + std::to_string(j) +
                   ") touched " + std::to_string(parity_changes) +
                   " parity symbols" + (same_row ? "" : " across several rows") +
                   "; expected exactly " + std::to_string(code.parities()) +
                   " in the changed row";
      res.counts["probes"] = p + 1;
      return res;
    }
  }
  res.counts["probes"] = probes;
  res.detail = "every probe touched exactly " + std::to_string(code.parities()) +
               " parity symbols in the changed row";
  return res;
}

bool Report::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed()) return false;
  return true;
}

std::string Report::to_json() const {
  json j;
  j["family"] = family;
  json p = json::object();
  for (const auto& [key, val] : params) p[key] = val;
  j["params"] = p;
  j["seed"] = seed;
  j["field"] = field;
  json d = json::object();
  for (const auto& [key, val] : derived) d[key] = val;
  j["derived"] = d;
  json cs = json::array();
  for (const auto& c : checks) {
    json cj;
    cj["name"] = c.name;
    cj["status"] = c.status;
    cj["detail"] = c.detail;
    json counts = json::object();
    for (const auto& [key, val] : c.counts) counts[key] = val;
    cj["counts"] = counts;
    json bt = json::array();
    for (const auto& b : c.bound_table) bt.push_back(bound_json(b));
    cj["bounds"] = bt;
    cs.push_back(cj);
  }
  j["checks"] = cs;
  j["passed"] = all_passed();
  return j.dump(2) + "\n";
}

std::string Report::to_tsv() const {
  std::ostringstream out;
  out << "check\tstatus\tcounts\tdetail\n";
  for (const auto& c : checks) {
    out << c.name << '\t' << c.status << '\t';
    bool first = true;
    for (const auto& [key, val] : c.counts) {
      if (!first) out << ';';
      first = false;
      out << key << '=' << val;
    }
    out << '\t' << c.detail << '\n';
    for (const auto& b : c.bound_table) {
      out << "  bound:" << b.name << '\t' << rational_str(b.value) << '\t'
          << "measured=" << (b.measured ? std::to_string(*b.measured) : "-")
          << '\t' << (b.attained() ? "attained" : "not attained") << '\n';
    }
  }
  out << "result\t" << (all_passed() ? "pass" : "fail") << "\t\t\n";
  return out.str();
}

Report run(const io::CodeHandle& code, const ExperimentConfig& cfg,
           const Codeword* fixed) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> checks = cfg.checks;
  if (checks.empty()) checks = default_checks(code.family);
  for (const auto& c : checks)
    if (!known_check(c)) throw std::invalid_argument("unknown check `" + c + "`");
  auto wants = [&checks](const std::string& name) {
    return std::find(checks.begin(), checks.end(), name) != checks.end();
  };

  Report rep;
  rep.family = io::family_name(code.family);
  rep.params = code.params();
  rep.seed = cfg.seed;
  rep.field = code.field()->describe();
  rep.derived = {{"n", code.nodes()},
                 {"k", code.data_nodes()},
                 {"r", code.parities()},
                 {"l", base_rows(code)},
                 {"racks", code.racks()},
                 {"rack_size", code.rack_size()},
                 {"helper_groups", code.helper_groups()},
                 {"stages", code.stages()},
                 {"degenerate", code.degenerate() ? 1 : 0}};

  const bool needs_sweep = wants("repair") || wants("uniform-download") ||
                           wants("access") || wants("bounds");
  SweepResult sweep;
  if (needs_sweep) {
    Codeword cw = [&] {
      if (fixed) return *fixed;
      Rng rng(cfg.seed);
      return random_codeword(code, rng);
    }();
    sweep = run_repair_sweep(code, cw, enumerate_scenarios(code, cfg));
  }

  for (const char* name : kCheckOrder) {
    if (!wants(name)) continue;
    const std::string c = name;
    if (c == "mds")
      rep.checks.push_back(verify_mds(code, cfg, fixed));
    else if (c == "repair")
      rep.checks.push_back(summarize_repair(code, sweep));
    else if (c == "uniform-download")
      rep.checks.push_back(check_uniform_download(code, sweep));
    else if (c == "access")
      rep.checks.push_back(check_access(code, sweep));
    else if (c == "bounds")
      rep.checks.push_back(check_bounds(code, sweep));
    else if (c == "optimal-update")
      rep.checks.push_back(check_optimal_update(code, cfg));
  }

  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

Report run(const ExperimentConfig& cfg) {
  return run(io::build_code(cfg.family, cfg.params), cfg, nullptr);
}

}  // namespace rackmsr::harness
