#include "rackmsr/codec_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rackmsr::io {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string join_encodings(const std::vector<FieldElement>& v) {
  if (v.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(',');
    out += v[i].str();
  }
  return out;
}

std::vector<FieldElement> parse_encodings(const FieldCtxPtr& field,
                                          const std::string& csv) {
  std::vector<FieldElement> out;
  if (csv == "-") return out;
  for (const auto& tok : split(csv, ',')) out.push_back(field->from_string(tok));
  return out;
}

long take(const std::map<std::string, long>& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument("missing parameter `" + key + "`");
  return it->second;
}

void reject_unknown(const std::map<std::string, long>& params,
                    const std::vector<std::string>& known, Family f) {
  for (const auto& [key, _] : params)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown parameter `" + key + "` for family " +
                                  family_name(f));
}

json elements_json(const CodeHandle& h) {
  json e = json::object();
  switch (h.family) {
    case Family::c1:
      e["lambda"] = h.c1->lambda.str();
      break;
    case Family::c2: {
      json lj = json::array();
      for (const auto& x : h.c2->lambda) lj.push_back(x.str());
      json mj = json::array();
      for (const auto& x : h.c2->mu) mj.push_back(x.str());
      e["lambda"] = lj;
      e["mu"] = mj;
      break;
    }
    case Family::c3: {
      e["lambda"] = h.c3->lambda.str();
      json mj = json::array();
      for (const auto& x : h.c3->mu) mj.push_back(x.str());
      e["mu"] = mj;
      break;
    }
    case Family::rs: {
      e["lambda"] = h.rs->lambda.str();
      json li = json::array();
      for (const auto& x : h.rs->lambda_i) li.push_back(x.str());
      e["lambda_i"] = li;
      e["mu"] = h.rs->mu.str();
      e["primes"] = h.rs->primes;
      break;
    }
  }
  return e;
}

void verify_match(bool ok) {
  if (!ok)
    throw std::runtime_error(
        "stored multipliers do not match the rebuilt code; the file was "
        "produced by an incompatible build");
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::c1: return "C1";
    case Family::c2: return "C2";
    case Family::c3: return "C3";
    case Family::rs: return "RS";
  }
  throw std::logic_error("unreachable family tag");
}

Family family_from(const std::string& name) {
  std::string u;
  for (char c : name) u.push_back(static_cast<char>(std::toupper(c)));
  if (u == "C1") return Family::c1;
  if (u == "C2" || u == "OA") return Family::c2;
  if (u == "C3") return Family::c3;
  if (u == "RS") return Family::rs;
  throw std::invalid_argument("unknown code family `" + name +
                              "` (expected C1, C2, C3 or RS)");
}

const FieldCtxPtr& CodeHandle::field() const {
  switch (family) {
    case Family::c1: return c1->field;
    case Family::c2: return c2->field;
    case Family::c3: return c3->field;
    case Family::rs: return rs->field;
  }
  throw std::logic_error("unreachable family tag");
}

int CodeHandle::rows() const {
  switch (family) {
    case Family::c1: return static_cast<int>(c1->l);
    case Family::c2: return static_cast<int>(c2->l);
    case Family::c3: return static_cast<int>(c3->l);
    case Family::rs: return 1;
  }
  throw std::logic_error("unreachable family tag");
}

int CodeHandle::nodes() const {
  switch (family) {
    case Family::c1: return c1->n;
    case Family::c2: return c2->n;
    case Family::c3: return c3->n;
    case Family::rs: return rs->n;
  }
  throw std::logic_error("unreachable family tag");
}

int CodeHandle::data_nodes() const {
  switch (family) {
    case Family::c1: return c1->k;
    case Family::c2: return c2->k;
    case Family::c3: return c3->k;
    case Family::rs: return rs->k;
  }
  throw std::logic_error("unreachable family tag");
}

int CodeHandle::racks() const {
  switch (family) {
    case Family::c1: return c1->racks;
    case Family::c2: return c2->n;
    case Family::c3: return c3->racks;
    case Family::rs: return rs->racks;
  }
  throw std::logic_error("unreachable family tag");
}

int CodeHandle::rack_size() const {
  switch (family) {
    case Family::c1: return c1->rack_size;
    case Family::c2: return 1;
    case Family::c3: return c3->rack_size;
    case Family::rs: return rs->rack_size;
  }
  throw std::logic_error("unreachable family tag");
}

int CodeHandle::helper_groups() const {
  switch (family) {
    case Family::c1: return c1->helpers;
    case Family::c2: return c2->d;
    case Family::c3: return c3->helpers;
    case Family::rs: return rs->helpers;
  }
  throw std::logic_error("unreachable family tag");
}

int CodeHandle::stages() const {
  switch (family) {
    case Family::c1: return c1->sbar;
    case Family::c2: return c2->s;
    case Family::c3: return c3->sbar;
    case Family::rs: return rs->sbar;
  }
  throw std::logic_error("unreachable family tag");
}

bool CodeHandle::degenerate() const { return stages() == 1; }

std::vector<std::pair<std::string, long>> CodeHandle::params() const {
  switch (family) {
    case Family::c1:
      return {{"racks", c1->racks}, {"rack_size", c1->rack_size}, {"k", c1->k},
              {"helpers", c1->helpers}};
    case Family::c2:
      return {{"n", c2->n}, {"k", c2->k}, {"d", c2->d}};
    case Family::c3:
      return {{"racks", c3->racks}, {"rack_size", c3->rack_size}, {"k", c3->k},
              {"helpers", c3->helpers}};
    case Family::rs:
      return {{"q", static_cast<long>(rs->q)}, {"racks", rs->racks},
              {"rack_size", rs->rack_size}, {"k", rs->k},
              {"helpers", rs->helpers}};
  }
  throw std::logic_error("unreachable family tag");
}

Codeword CodeHandle::encode(const Codeword& data) const {
  switch (family) {
    case Family::c1: return c1::encode(*c1, data);
    case Family::c2: return oa::encode(*c2, data);
    case Family::c3: return c3::encode(*c3, data);
    case Family::rs: return rs::encode(*rs, data);
  }
  throw std::logic_error("unreachable family tag");
}

bool CodeHandle::parity_check(const Codeword& cw) const {
  switch (family) {
    case Family::c1: return c1::parity_check(*c1, cw);
    case Family::c2: return oa::parity_check(*c2, cw);
    case Family::c3: return c3::parity_check(*c3, cw);
    case Family::rs: return rs::parity_check(*rs, cw);
  }
  throw std::logic_error("unreachable family tag");
}

Codeword CodeHandle::erasure_decode(const Codeword& cw,
                                    const std::vector<int>& erased) const {
  switch (family) {
    case Family::c1: return c1::erasure_decode(*c1, cw, erased);
    case Family::c2: return oa::erasure_decode(*c2, cw, erased);
    case Family::c3: return c3::erasure_decode(*c3, cw, erased);
    case Family::rs: return rs::erasure_decode(*rs, cw, erased);
  }
  throw std::logic_error("unreachable family tag");
}

std::vector<int> CodeHandle::helper_universe(int failed) const {
  if (failed < 0 || failed >= nodes())
    throw std::invalid_argument("failed node out of range");
  std::vector<int> out;
  if (family == Family::c2) {
    for (int j = 0; j < nodes(); ++j)
      if (j != failed) out.push_back(j);
  } else {
    const int host = failed / rack_size();
    for (int g = 0; g < racks(); ++g)
      if (g != host) out.push_back(g);
  }
  return out;
}

RepairResult CodeHandle::repair(const Codeword& cw, int failed,
                                const std::vector<int>& helpers) const {
  switch (family) {
    case Family::c1: return c1::repair_node(*c1, cw, failed, helpers);
    case Family::c2: return oa::repair_node(*c2, cw, failed, helpers);
    case Family::c3: return c3::repair_node(*c3, cw, failed, helpers);
    case Family::rs: return rs::repair_node(*rs, cw, failed, helpers);
  }
  throw std::logic_error("unreachable family tag");
}

CodeHandle build_code(Family f, const std::map<std::string, long>& params,
                      FieldCtxPtr field) {
  CodeHandle h;
  h.family = f;
  switch (f) {
    case Family::c1: {
      reject_unknown(params, {"racks", "rack_size", "k", "helpers"}, f);
      h.c1 = std::make_shared<c1::C1Spec>(
          c1::build(static_cast<int>(take(params, "racks")),
                    static_cast<int>(take(params, "rack_size")),
                    static_cast<int>(take(params, "k")),
                    static_cast<int>(take(params, "helpers")), std::move(field)));
      break;
    }
    case Family::c2: {
      reject_unknown(params, {"n", "k", "d"}, f);
      h.c2 = std::make_shared<oa::OASpec>(
          oa::build(static_cast<int>(take(params, "n")),
                    static_cast<int>(take(params, "k")),
                    static_cast<int>(take(params, "d")), std::move(field)));
      break;
    }
    case Family::c3: {
      reject_unknown(params, {"racks", "rack_size", "k", "helpers"}, f);
      h.c3 = std::make_shared<c3::C3Spec>(
          c3::build(static_cast<int>(take(params, "racks")),
                    static_cast<int>(take(params, "rack_size")),
                    static_cast<int>(take(params, "k")),
                    static_cast<int>(take(params, "helpers")), std::move(field)));
      break;
    }
    case Family::rs: {
      if (field)
        throw std::invalid_argument(
            "the scalar family derives its own extension tower; a field "
            "override is not accepted");
      reject_unknown(params, {"q", "racks", "rack_size", "k", "helpers",
                              "allow_large"}, f);
      auto it = params.find("allow_large");
      const bool allow = it != params.end() && it->second != 0;
      h.rs = std::make_shared<rs::RSSpec>(
          rs::build(static_cast<std::uint64_t>(take(params, "q")),
                    static_cast<int>(take(params, "racks")),
                    static_cast<int>(take(params, "rack_size")),
                    static_cast<int>(take(params, "k")),
                    static_cast<int>(take(params, "helpers")), allow));
      break;
    }
  }
  return h;
}

std::string spec_to_json(const CodeHandle& h) {
  json j;
  j["format_version"] = 1;
  j["family"] = family_name(h.family);
  json p = json::object();
  for (const auto& [key, val] : h.params()) p[key] = val;
  j["params"] = p;
  j["field"] = h.field()->describe();
  j["seed"] = FieldCtx::kDefaultSeed;
  j["elements"] = elements_json(h);
  json d = json::object();
  d["n"] = h.nodes();
  d["k"] = h.data_nodes();
  d["r"] = h.parities();
  d["l"] = h.rows();
  d["racks"] = h.racks();
  d["rack_size"] = h.rack_size();
  d["helper_groups"] = h.helper_groups();
  d["stages"] = h.stages();
  d["degenerate"] = h.degenerate();
  j["derived"] = d;
  return j.dump(2) + "\n";
}

CodeHandle spec_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format_version", 0) != 1)
    throw std::runtime_error("unsupported spec format version");
  const Family f = family_from(j.at("family").get<std::string>());
  std::map<std::string, long> params;
  for (const auto& [key, val] : j.at("params").items())
    params[key] = val.get<long>();
  FieldCtxPtr field = FieldCtx::parse(j.at("field").get<std::string>());
  const json& e = j.at("elements");
  switch (f) {
    case Family::c1: {
      CodeHandle h = build_code(f, params, field);
      verify_match(h.c1->lambda.str() == e.at("lambda").get<std::string>());
      return h;
    }
    case Family::c2: {
      std::vector<FieldElement> lambda, mu;
      for (const auto& s : e.at("lambda"))
        lambda.push_back(field->from_string(s.get<std::string>()));
      for (const auto& s : e.at("mu"))
        mu.push_back(field->from_string(s.get<std::string>()));
      CodeHandle h;
      h.family = f;
      h.c2 = std::make_shared<oa::OASpec>(
          oa::build(static_cast<int>(take(params, "n")),
                    static_cast<int>(take(params, "k")),
                    static_cast<int>(take(params, "d")), field, lambda, mu));
      return h;
    }
    case Family::c3: {
      CodeHandle h = build_code(f, params, field);
      verify_match(h.c3->lambda.str() == e.at("lambda").get<std::string>());
      verify_match(join_encodings(h.c3->mu) ==
                   join_encodings(parse_encodings(field, [&] {
                     std::string csv;
                     for (const auto& s : e.at("mu")) {
                       if (!csv.empty()) csv.push_back(',');
                       csv += s.get<std::string>();
                     }
                     return csv.empty() ? std::string("-") : csv;
                   }())));
      return h;
    }
    case Family::rs: {
      std::vector<FieldElement> lambda_i;
      for (const auto& s : e.at("lambda_i"))
        lambda_i.push_back(field->from_string(s.get<std::string>()));
      CodeHandle h;
      h.family = f;
      h.rs = std::make_shared<rs::RSSpec>(rs::restore(
          static_cast<std::uint64_t>(take(params, "q")),
          static_cast<int>(take(params, "racks")),
          static_cast<int>(take(params, "rack_size")),
          static_cast<int>(take(params, "k")),
          static_cast<int>(take(params, "helpers")), field,
          field->from_string(e.at("lambda").get<std::string>()), lambda_i,
          field->from_string(e.at("mu").get<std::string>())));
      std::vector<int> primes = e.at("primes").get<std::vector<int>>();
      verify_match(primes == h.rs->primes);
      return h;
    }
  }
  throw std::logic_error("unreachable family tag");
}

void save_spec(const CodeHandle& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open `" + path + "` for writing");
  out << spec_to_json(h);
}

CodeHandle load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open `" + path + "`");
  std::ostringstream buf;
  buf << in.rdbuf();
  return spec_from_json(buf.str());
}

void write_codeword(std::ostream& out, const CodeHandle& h, const Codeword& cw,
                    const std::set<int>& erased) {
  if (cw.rows() != h.rows() || cw.cols() != h.nodes())
    throw std::invalid_argument("codeword shape does not match the code");
  switch (h.family) {
    case Family::c1:
      out << "C1 " << h.c1->racks << ' ' << h.c1->rack_size << ' ' << h.c1->k
          << ' ' << h.c1->helpers << ' ' << h.field()->describe() << ' '
          << h.c1->lambda.str() << '\n';
      break;
    case Family::c2:
      out << "C2 " << h.c2->n << ' ' << h.c2->k << ' ' << h.c2->d << ' '
          << h.field()->describe() << ' ' << join_encodings(h.c2->lambda) << ' '
          << join_encodings(h.c2->mu) << '\n';
      break;
    case Family::c3:
      out << "C3 " << h.c3->racks << ' ' << h.c3->rack_size << ' ' << h.c3->k
          << ' ' << h.c3->helpers << ' ' << h.field()->describe() << ' '
          << h.c3->lambda.str() << ' ' << join_encodings(h.c3->mu) << '\n';
      break;
    case Family::rs: {
      out << "RS " << h.rs->q << ' ' << h.rs->racks << ' ' << h.rs->rack_size
          << ' ' << h.rs->k << ' ' << h.rs->helpers << ' ';
      for (std::size_t i = 0; i < h.rs->primes.size(); ++i)
        out << (i ? "," : "") << h.rs->primes[i];
      out << ' ' << h.field()->describe() << ' ' << FieldCtx::kDefaultSeed
          << '\n';
      // One scalar symbol per line.
      for (int c = 0; c < cw.cols(); ++c) {
        if (erased.count(c))
          out << "*\n";
        else
          out << cw.at(0, c).str() << '\n';
      }
      return;
    }
  }
  for (int t = 0; t < cw.rows(); ++t) {
    for (int c = 0; c < cw.cols(); ++c) {
      if (c) out << ' ';
      if (erased.count(c))
        out << '*';
      else
        out << cw.at(t, c).str();
    }
    out << '\n';
  }
}

namespace {

CodeHandle handle_from_header(const std::string& line) {
  std::istringstream hs(line);
  std::string tag;
  hs >> tag;
  const Family f = family_from(tag);
  std::map<std::string, long> params;
  std::string ftok;
  switch (f) {
    case Family::c1: {
      long racks, u, k, d;
      std::string lam;
      if (!(hs >> racks >> u >> k >> d >> ftok >> lam))
        throw std::runtime_error("malformed C1 header");
      params = {{"racks", racks}, {"rack_size", u}, {"k", k}, {"helpers", d}};
      CodeHandle h = build_code(f, params, FieldCtx::parse(ftok));
      verify_match(h.c1->lambda.str() == lam);
      return h;
    }
    case Family::c2: {
      long n, k, d;
      std::string lcsv, mcsv;
      if (!(hs >> n >> k >> d >> ftok >> lcsv >> mcsv))
        throw std::runtime_error("malformed C2 header");
      FieldCtxPtr field = FieldCtx::parse(ftok);
      CodeHandle h;
      h.family = f;
      h.c2 = std::make_shared<oa::OASpec>(
          oa::build(static_cast<int>(n), static_cast<int>(k),
                    static_cast<int>(d), field, parse_encodings(field, lcsv),
                    parse_encodings(field, mcsv)));
      return h;
    }
    case Family::c3: {
      long racks, u, k, d;
      std::string lam, mcsv;
      if (!(hs >> racks >> u >> k >> d >> ftok >> lam >> mcsv))
        throw std::runtime_error("malformed C3 header");
      params = {{"racks", racks}, {"rack_size", u}, {"k", k}, {"helpers", d}};
      CodeHandle h = build_code(f, params, FieldCtx::parse(ftok));
      verify_match(h.c3->lambda.str() == lam &&
                   join_encodings(h.c3->mu) == mcsv);
      return h;
    }
    case Family::rs: {
      long q, racks, u, k, d;
      std::string pcsv, seed;
      if (!(hs >> q >> racks >> u >> k >> d >> pcsv >> ftok >> seed))
        throw std::runtime_error("malformed RS header");
      if (seed != std::to_string(FieldCtx::kDefaultSeed))
        throw std::runtime_error(
            "the file records an unsupported build seed; rebuild it with this "
            "artifact");
      params = {{"q", q}, {"racks", racks}, {"rack_size", u}, {"k", k},
                {"helpers", d}, {"allow_large", 1}};
      CodeHandle h = build_code(f, params);
      std::string primes;
      for (std::size_t i = 0; i < h.rs->primes.size(); ++i)
        primes += (i ? "," : "") + std::to_string(h.rs->primes[i]);
      verify_match(primes == pcsv && h.field()->describe() == ftok);
      return h;
    }
  }
  throw std::logic_error("unreachable family tag");
}

}  // namespace

LoadedCodeword read_codeword(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty codeword file");
  CodeHandle h = handle_from_header(line);
  Codeword cw(h.rows(), h.nodes(), h.field());
  std::set<int> erased;
  const int lines = h.family == Family::rs ? h.nodes() : h.rows();
  const int per_line = h.family == Family::rs ? 1 : h.nodes();
  for (int t = 0; t < lines; ++t) {
    if (!std::getline(in, line))
      throw std::runtime_error("codeword file is truncated");
    std::istringstream ls(line);
    std::string tok;
    for (int c = 0; c < per_line; ++c) {
      if (!(ls >> tok)) throw std::runtime_error("codeword file is truncated");
      const int col = h.family == Family::rs ? t : c;
      const int row = h.family == Family::rs ? 0 : t;
      if (tok == "*") {
        erased.insert(col);
        cw.at(row, col) = h.field()->zero();
      } else {
        cw.at(row, col) = h.field()->from_string(tok);
      }
    }
    if (ls >> tok) throw std::runtime_error("too many entries on a codeword line");
  }
  LoadedCodeword out{std::move(h), std::move(cw), {erased.begin(), erased.end()}};
  return out;
}

void write_codeword_file(const std::string& path, const CodeHandle& h,
                         const Codeword& cw, const std::set<int>& erased) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open `" + path + "` for writing");
  write_codeword(out, h, cw, erased);
}

LoadedCodeword read_codeword_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open `" + path + "`");
  return read_codeword(in);
}

}  // namespace rackmsr::io
