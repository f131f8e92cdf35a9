#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <rackmsr/bounds.hpp>
#include <rackmsr/codec_io.hpp>
#include <rackmsr/harness.hpp>
#include <rackmsr/rng.hpp>

using namespace rackmsr;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

std::string rational_str(const mpq_class& q) {
  return q.get_den() == 1 ? q.get_num().get_str()
                          : q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::uint64_t resolve_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("RACKMSR_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw std::invalid_argument("RACKMSR_SEED must be a decimal integer");
    return static_cast<std::uint64_t>(v);
  }
  return flag_seed;
}

struct BuildArgs {
  std::string family;
  std::optional<long> racks, rack_size, k, helpers, n, d, q;
  bool allow_large = false;
  std::string field;
  std::string out;
};

io::CodeHandle build_from_args(const BuildArgs& a) {
  const io::Family f = io::family_from(a.family);
  std::map<std::string, long> params;
  auto put = [&params](const char* key, const std::optional<long>& v) {
    if (v) params[key] = *v;
  };
  put("racks", a.racks);
  put("rack_size", a.rack_size);
  put("k", a.k);
  put("helpers", a.helpers);
  put("n", a.n);
  put("d", a.d);
  put("q", a.q);
  if (a.allow_large) params["allow_large"] = 1;
  FieldCtxPtr field;
  if (!a.field.empty()) field = FieldCtx::parse(a.field);
  return io::build_code(f, params, std::move(field));
}

Codeword seeded_data(const io::CodeHandle& code, std::uint64_t seed) {
  Rng rng(seed);
  Codeword data(code.rows(), code.data_nodes(), code.field());
  for (int i = 0; i < data.rows(); ++i)
    for (int j = 0; j < data.cols(); ++j) data.at(i, j) = code.field()->random(rng);
  return data;
}

Codeword read_data_grid(const io::CodeHandle& code, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open `" + path + "`");
  Codeword data(code.rows(), code.data_nodes(), code.field());
  const int lines = code.family == io::Family::rs ? code.data_nodes() : code.rows();
  const int per_line = code.family == io::Family::rs ? 1 : code.data_nodes();
  std::string tok;
  for (int t = 0; t < lines; ++t)
    for (int c = 0; c < per_line; ++c) {
      if (!(in >> tok))
        throw std::runtime_error("data file is shorter than rows x data nodes");
      const int row = code.family == io::Family::rs ? 0 : t;
      const int col = code.family == io::Family::rs ? t : c;
      data.at(row, col) = code.field()->from_string(tok);
    }
  if (in >> tok) throw std::runtime_error("data file has trailing entries");
  return data;
}

nlohmann::json transcript_json(const RepairTranscript& t) {
  nlohmann::json j;
  j["failed_node"] = t.failed_node;
  j["helper_groups"] = t.helper_groups;
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [g, sent] : t.downloaded)
    per[std::to_string(g)] = static_cast<long>(sent.size()) * t.download_weight;
  j["downloaded_per_group"] = per;
  j["downloaded_base_symbols"] = t.downloaded_base_symbols();
  j["accessed_base_symbols"] = t.accessed_base_symbols();
  nlohmann::json acc = nlohmann::json::object();
  for (const auto& [node, rows] : t.accessed_rows)
    acc[std::to_string(node)] = static_cast<long>(rows.size());
  j["accessed_rows_per_node"] = acc;
  nlohmann::json loc = nlohmann::json::object();
  for (const auto& [node, rows] : t.local_accessed_rows)
    loc[std::to_string(node)] = static_cast<long>(rows.size());
  j["local_rows_per_node"] = loc;
  j["download_weight"] = t.download_weight;
  j["access_weight"] = t.access_weight;
  return j;
}

struct BoundRow {
  std::string name;
  std::vector<std::pair<std::string, long>> inputs;
  std::string value;                 // exact rational, or decimal for real floors
  std::optional<double> value_real;  // set for real-valued floors
  std::optional<long> measured;
  std::optional<bool> attained;      // unset when attainment is not meaningful
};

void print_bound_rows(const std::vector<BoundRow>& rows,
                      const std::string& format, std::ostream& out) {
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& b : rows) {
      nlohmann::json j;
      j["name"] = b.name;
      nlohmann::json in = nlohmann::json::object();
      for (const auto& [key, val] : b.inputs) in[key] = val;
      j["inputs"] = in;
      j["value"] = b.value;
      if (b.value_real) j["value_real"] = *b.value_real;
      j["measured"] = b.measured ? nlohmann::json(*b.measured) : nlohmann::json();
      j["attained"] = b.attained ? nlohmann::json(*b.attained) : nlohmann::json();
      arr.push_back(j);
    }
    out << arr.dump(2) << "\n";
    return;
  }
  out << "bound\tinputs\tvalue\tmeasured\tattained\n";
  for (const auto& b : rows) {
    out << b.name << '\t';
    for (std::size_t i = 0; i < b.inputs.size(); ++i) {
      if (i) out << ',';
      out << b.inputs[i].first << '=' << b.inputs[i].second;
    }
    out << '\t' << b.value << '\t'
        << (b.measured ? std::to_string(*b.measured) : "-") << '\t'
        << (b.attained ? (*b.attained ? "yes" : "no") : "-") << '\n';
  }
}

int cmd_bench(std::uint64_t seed);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rackmsr: array and scalar erasure codes with rack-aware repair.\n"
      "All node, rack and row labels are 0-based, in output as well as input.\n"
      "The environment variable RACKMSR_SEED overrides any --seed flag."};
  app.require_subcommand(1);

  // ---- build ----
  BuildArgs ba;
  auto* build = app.add_subcommand(
      "build", "Choose a field and multipliers, write a reusable spec JSON");
  build->add_option("--family", ba.family, "c1 | c2 | c3 | rs")->required();
  build->add_option("--racks", ba.racks, "number of racks");
  build->add_option("--rack-size", ba.rack_size, "nodes per rack (u)");
  build->add_option("-k,--data-nodes", ba.k, "data nodes (k)");
  build->add_option("--helpers", ba.helpers, "helper racks per repair");
  build->add_option("-n,--nodes", ba.n, "nodes (homogeneous family)");
  build->add_option("-d,--helper-nodes", ba.d, "helper nodes (homogeneous family)");
  build->add_option("--q", ba.q, "base field size (scalar family)");
  build->add_flag("--allow-large", ba.allow_large,
                  "accept extension degrees beyond 1024");
  build->add_option("--field", ba.field,
                    "field override, e.g. 17 or 2^4/1,1,0,0,1");
  build->add_option("-o,--out", ba.out, "spec JSON path")->required();

  // ---- encode ----
  std::string enc_spec, enc_data, enc_out;
  bool enc_random = false;
  std::uint64_t enc_seed = 1;
  auto* encode = app.add_subcommand("encode", "Encode data into a codeword file");
  encode->add_option("--spec", enc_spec, "spec JSON from `build`")->required();
  encode->add_option("--data", enc_data, "data grid file (decimal encodings)");
  encode->add_flag("--random", enc_random, "draw seeded random data instead");
  encode->add_option("--seed", enc_seed, "seed for --random");
  encode->add_option("-o,--out", enc_out, "codeword file path")->required();

  // ---- corrupt ----
  std::string cor_in, cor_out;
  std::vector<int> cor_erase, cor_flip;
  std::uint64_t cor_seed = 1;
  auto* corrupt = app.add_subcommand(
      "corrupt", "Erase columns or flip symbols in a codeword file");
  corrupt->add_option("--in", cor_in, "codeword file")->required();
  corrupt->add_option("--erase", cor_erase, "columns to erase")->delimiter(',');
  corrupt->add_option("--flip", cor_flip, "columns to corrupt in one random row")
      ->delimiter(',');
  corrupt->add_option("--seed", cor_seed, "seed for --flip");
  corrupt->add_option("-o,--out", cor_out, "output path")->required();

  // ---- repair ----
  std::string rep_in, rep_spec, rep_out, rep_json;
  int rep_fail = -1;
  std::vector<int> rep_helpers;
  auto* repair = app.add_subcommand(
      "repair", "Repair one node from helper groups and report the transcript");
  repair->add_option("--in", rep_in, "codeword file")->required();
  repair->add_option("--spec", rep_spec,
                     "spec JSON (skips rebuilding the code from the header)");
  repair->add_option("--fail", rep_fail, "failed node (0-based)")->required();
  repair->add_option("--helpers", rep_helpers,
                     "helper groups; default: the first admissible set")
      ->delimiter(',');
  repair->add_option("-o,--out", rep_out, "write the repaired codeword here");
  repair->add_option("--json", rep_json, "write the transcript JSON here");

  // ---- verify ----
  std::string ver_spec, ver_cw, ver_json, ver_format = "tsv";
  std::vector<std::string> ver_checks;
  std::uint64_t ver_seed = 1;
  std::optional<long> ver_sample;
  int ver_codewords = 10;
  auto* verify = app.add_subcommand(
      "verify", "Run the experiment checks; exit 0 only if every check passes");
  verify->add_option("--spec", ver_spec, "spec JSON from `build`")->required();
  verify->add_option("--codeword", ver_cw,
                     "verify this codeword file instead of seeded random data");
  verify->add_option("--checks", ver_checks,
                     "subset of: mds,repair,uniform-download,access,bounds,"
                     "optimal-update")
      ->delimiter(',');
  verify->add_option("--seed", ver_seed, "run seed");
  verify->add_option("--sample", ver_sample, "scenario budget (default: ceiling rule)");
  verify->add_option("--codewords", ver_codewords, "random codewords per erasure pass");
  verify->add_option("--json", ver_json, "also write the report JSON here");
  verify->add_option("--format", ver_format, "stdout format: tsv | json")
      ->check(CLI::IsMember({"tsv", "json"}));

  // ---- bounds ----
  std::optional<long> bo_d, bo_k, bo_dbar, bo_kbar, bo_u, bo_l, bo_s, bo_nbar,
      bo_measured;
  std::string bo_variant = "a", bo_format = "tsv";
  auto* bnd = app.add_subcommand(
      "bounds", "Evaluate every bound whose inputs are given, as a table");
  bnd->add_option("--d", bo_d, "helper nodes");
  bnd->add_option("--k", bo_k, "data nodes");
  bnd->add_option("--dbar", bo_dbar, "helper racks");
  bnd->add_option("--kbar", bo_kbar, "whole data racks");
  bnd->add_option("--u", bo_u, "rack size");
  bnd->add_option("--l", bo_l, "sub-packetization");
  bnd->add_option("--s", bo_s, "stage count s");
  bnd->add_option("--nbar", bo_nbar, "total racks");
  bnd->add_option("--variant", bo_variant, "sub-packetization variant: a | b")
      ->check(CLI::IsMember({"a", "b"}));
  bnd->add_option("--measured", bo_measured, "measured count to compare against");
  bnd->add_option("--format", bo_format, "tsv | json")
      ->check(CLI::IsMember({"tsv", "json"}));

  // ---- bench ----
  std::uint64_t bch_seed = 1;
  auto* bench = app.add_subcommand(
      "bench", "Build the demo codes and time encode and repair once");
  bench->add_option("--seed", bch_seed, "data seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }

  try {
    if (build->parsed()) {
      const io::CodeHandle code = build_from_args(ba);
      io::save_spec(code, ba.out);
      std::cout << "family " << io::family_name(code.family) << ", field "
                << code.field()->describe() << ", n=" << code.nodes()
                << ", k=" << code.data_nodes() << ", rows=" << code.rows()
                << (code.degenerate() ? ", degenerate repair" : "") << "\n"
                << "spec written to " << ba.out << "\n";
      return kOk;
    }

    if (encode->parsed()) {
      if (enc_random == !enc_data.empty())
        throw std::invalid_argument("pass exactly one of --data and --random");
      const io::CodeHandle code = io::load_spec(enc_spec);
      const Codeword data = enc_random
                                ? seeded_data(code, resolve_seed(enc_seed))
                                : read_data_grid(code, enc_data);
      io::write_codeword_file(enc_out, code, code.encode(data));
      std::cout << "codeword written to " << enc_out << "\n";
      return kOk;
    }

    if (corrupt->parsed()) {
      auto loaded = io::read_codeword_file(cor_in);
      std::set<int> erased(loaded.erased_nodes.begin(), loaded.erased_nodes.end());
      for (int c : cor_erase) {
        if (c < 0 || c >= loaded.code.nodes())
          throw std::invalid_argument("--erase column out of range");
        erased.insert(c);
      }
      Rng rng(resolve_seed(cor_seed));
      for (int c : cor_flip) {
        if (c < 0 || c >= loaded.code.nodes())
          throw std::invalid_argument("--flip column out of range");
        const int row = static_cast<int>(
            rng.below(static_cast<std::uint64_t>(loaded.code.rows())));
        FieldElement delta = loaded.code.field()->random(rng);
        while (delta.is_zero()) delta = loaded.code.field()->random(rng);
        loaded.word.at(row, c) = loaded.word.at(row, c) + delta;
      }
      io::write_codeword_file(cor_out, loaded.code, loaded.word, erased);
      std::cout << "wrote " << cor_out << " with " << erased.size()
                << " erased column(s)\n";
      return kOk;
    }

    if (repair->parsed()) {
      io::LoadedCodeword loaded = io::read_codeword_file(rep_in);
      if (!rep_spec.empty()) {
        io::CodeHandle from_spec = io::load_spec(rep_spec);
        if (io::spec_to_json(from_spec) != io::spec_to_json(loaded.code))
          throw std::invalid_argument(
              "--spec describes a different code than the codeword header");
        loaded.code = std::move(from_spec);
      }
      for (int e : loaded.erased_nodes)
        if (e != rep_fail)
          throw std::invalid_argument(
              "column " + std::to_string(e) +
              " is erased but only the failed node may be missing");
      std::vector<int> helpers = rep_helpers;
      if (helpers.empty()) {
        const auto universe = loaded.code.helper_universe(rep_fail);
        helpers.assign(universe.begin(),
                       universe.begin() + loaded.code.helper_groups());
      }
      const RepairResult rr = loaded.code.repair(loaded.word, rep_fail, helpers);
      std::cout << "repaired node " << rep_fail << ": downloaded "
                << rr.transcript.downloaded_base_symbols()
                << " base symbols from " << rr.transcript.helper_groups.size()
                << " helper group(s), accessed "
                << rr.transcript.accessed_base_symbols() << "\n";
      if (!rep_json.empty()) {
        std::ofstream out(rep_json);
        if (!out) throw std::runtime_error("cannot open `" + rep_json + "`");
        out << transcript_json(rr.transcript).dump(2) << "\n";
      }
      if (!rep_out.empty()) {
        Codeword fixed = loaded.word;
        fixed.set_column(rep_fail, rr.column);
        io::write_codeword_file(rep_out, loaded.code, fixed);
      }
      return kOk;
    }

    if (verify->parsed()) {
      const io::CodeHandle code = io::load_spec(ver_spec);
      harness::ExperimentConfig cfg;
      cfg.family = code.family;
      for (const auto& [key, val] : code.params()) cfg.params[key] = val;
      cfg.seed = resolve_seed(ver_seed);
      cfg.codewords = ver_codewords;
      cfg.sample = ver_sample;
      cfg.checks = ver_checks;
      std::optional<Codeword> fixed;
      if (!ver_cw.empty()) {
        auto loaded = io::read_codeword_file(ver_cw);
        if (io::spec_to_json(loaded.code) != io::spec_to_json(code))
          throw std::invalid_argument(
              "--codeword was produced by a different code than --spec");
        if (!loaded.erased_nodes.empty())
          throw std::invalid_argument(
              "--codeword has erased columns; re-encode or repair it first");
        fixed = std::move(loaded.word);
      }
      const harness::Report rep =
          harness::run(code, cfg, fixed ? &*fixed : nullptr);
      std::cout << (ver_format == "json" ? rep.to_json() : rep.to_tsv());
      if (!ver_json.empty()) {
        std::ofstream out(ver_json);
        if (!out) throw std::runtime_error("cannot open `" + ver_json + "`");
        out << rep.to_json();
      }
      return rep.all_passed() ? kOk : kCheckFailed;
    }

    if (bnd->parsed()) {
      std::vector<BoundRow> rows;
      auto add = [&rows, &bo_measured](std::string name,
                                       std::vector<std::pair<std::string, long>> in,
                                       const mpq_class& value) {
        BoundRow b;
        b.name = std::move(name);
        b.inputs = std::move(in);
        b.value = rational_str(value);
        b.measured = bo_measured;
        if (bo_measured) b.attained = mpq_class(*bo_measured) == value;
        rows.push_back(std::move(b));
      };
      if (bo_d && bo_k && bo_l)
        add("cutset", {{"d", *bo_d}, {"k", *bo_k}, {"l", *bo_l}},
            bounds::cutset_bound(*bo_d, *bo_k, *bo_l));
      if (bo_dbar && bo_kbar && bo_l)
        add("rack_cutset", {{"dbar", *bo_dbar}, {"kbar", *bo_kbar}, {"l", *bo_l}},
            bounds::rack_cutset_bound(*bo_dbar, *bo_kbar, *bo_l));
      if (bo_dbar && bo_u && bo_l && bo_s)
        add("access", {{"dbar", *bo_dbar}, {"u", *bo_u}, {"l", *bo_l}, {"s", *bo_s}},
            bounds::access_bound(*bo_dbar, *bo_u, *bo_l, *bo_s));
      if (bo_d && bo_k && bo_u && bo_l) {
        const auto [rack, local] =
            bounds::homogeneous_decomposition(*bo_d, *bo_k, *bo_u, *bo_l);
        add("decomposition_rack",
            {{"d", *bo_d}, {"k", *bo_k}, {"u", *bo_u}, {"l", *bo_l}}, rack);
        add("decomposition_local",
            {{"d", *bo_d}, {"k", *bo_k}, {"u", *bo_u}, {"l", *bo_l}}, local);
      }
      if (bo_nbar && bo_kbar && bo_dbar && bo_u) {
        const double v = bounds::subpacketization_bound(
            static_cast<int>(*bo_nbar), static_cast<int>(*bo_kbar),
            static_cast<int>(*bo_dbar), static_cast<int>(*bo_u),
            bo_variant == "a" ? bounds::SubpackVariant::a
                              : bounds::SubpackVariant::b);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.15g", v);
        BoundRow b;
        b.name = "subpacketization_" + bo_variant;
        b.inputs = {{"nbar", *bo_nbar}, {"kbar", *bo_kbar}, {"dbar", *bo_dbar},
                    {"u", *bo_u}};
        b.value = buf;
        b.value_real = v;
        rows.push_back(std::move(b));
      }
      if (rows.empty())
        throw std::invalid_argument(
            "no bound is computable from the given inputs; see `bounds --help`");
      print_bound_rows(rows, bo_format, std::cout);
      return kOk;
    }

    if (bench->parsed()) return cmd_bench(resolve_seed(bch_seed));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

namespace {

int cmd_bench(std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  struct Demo {
    io::Family family;
    std::map<std::string, long> params;
  };
  const std::vector<Demo> demos = {
      {io::Family::c1, {{"racks", 4}, {"rack_size", 2}, {"k", 5}, {"helpers", 3}}},
      {io::Family::c2, {{"n", 4}, {"k", 2}, {"d", 3}}},
      {io::Family::c3, {{"racks", 3}, {"rack_size", 2}, {"k", 3}, {"helpers", 2}}},
      {io::Family::rs,
       {{"q", 3}, {"racks", 3}, {"rack_size", 2}, {"k", 3}, {"helpers", 2}}}};
  std::cout << "family\tbuild_ms\tencode_ms\trepair_ms\tdownload\taccess\n";
  for (const auto& d : demos) {
    const auto t0 = clock::now();
    const io::CodeHandle code = io::build_code(d.family, d.params);
    const auto t1 = clock::now();
    const Codeword data = seeded_data(code, seed);
    const Codeword cw = code.encode(data);
    const auto t2 = clock::now();
    const auto universe = code.helper_universe(0);
    const std::vector<int> helpers(universe.begin(),
                                   universe.begin() + code.helper_groups());
    const RepairResult rr = code.repair(cw, 0, helpers);
    const auto t3 = clock::now();
    auto ms = [](clock::time_point a, clock::time_point b) {
      return std::chrono::duration<double, std::milli>(b - a).count();
    };
    char line[256];
    std::snprintf(line, sizeof line, "%s\t%.2f\t%.2f\t%.2f\t%lld\t%lld\n",
                  io::family_name(d.family).c_str(), ms(t0, t1), ms(t1, t2),
                  ms(t2, t3), rr.transcript.downloaded_base_symbols(),
                  rr.transcript.accessed_base_symbols());
    std::cout << line;
  }
  return kOk;
}

}  // namespace
