// skein_cli: basis listing, reduction to basis coordinates, relation derivation,
// curve normalization and verification jobs.
//
// Exit codes: 0 success, 1 input error (diagnostic names the field), 2 internal invariant breach.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "skein/io.hpp"

using namespace skein;

namespace {

struct Job {
  std::string command;
  int genus = 0;
  std::string n;
  std::string expr;
  std::string file;
  std::string strategy = "leftmost";
  std::optional<std::uint64_t> seed;
  std::string format;
  std::string target;  // derive-relation config or verify check
  std::string twist;
  int eps = 1;
  bool trace = false;
};

class InternalError : public std::runtime_error {
 public:
  InternalError(const std::string& what, std::string dump) : std::runtime_error(what), dump_(std::move(dump)) {}
  const std::string& dump() const { return dump_; }

 private:
  std::string dump_;
};

void need_genus(const Job& j) {
  if (j.genus < 2) throw InputError("field 'genus' must be given and >= 2");
}

std::string format_of(const Job& j, const char* dflt) {
  const std::string f = j.format.empty() ? dflt : j.format;
  if (f != "json" && f != "text") throw InputError("field 'format' must be json or text");
  return f;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("field 'file': cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("field 'file': '" + path + "' is not valid JSON: " + e.what());
  }
}

int parse_int(const std::string& s, const char* field) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError("field '" + std::string(field) + "' must be an integer, got '" + s + "'");
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

// ---- commands ---------------------------------------------------------------------------

int cmd_basis(const Job& j, std::ostream& out) {
  need_genus(j);
  const auto basis = enumerate_basis(j.genus);
  if (format_of(j, "text") == "json") {
    Json arr = Json::array();
    for (const auto& b : basis) arr.push_back(b.id());
    emit(out, arr);
  } else {
    for (const auto& b : basis) out << b.id() << "\n";
  }
  return 0;
}

int cmd_reduce(const Job& j, std::ostream& out) {
  if (j.expr.empty() == j.file.empty()) throw InputError("exactly one of fields 'expr' and 'file' is required");
  ExpressionInput in;
  if (!j.expr.empty()) {
    need_genus(j);
    in.genus = j.genus;
    in.expr = parse_expression(j.expr, j.genus);
  } else {
    in = expression_from_json(read_json_file(j.file), j.genus ? std::optional<int>(j.genus) : std::nullopt);
  }
  const Strategy st = parse_strategy(j.strategy);
  const std::string fmt = format_of(j, "json");
  Pipeline p(in.genus, st, iteration_cap_from_env());
  std::vector<TraceStep> trace;
  BasisCoordinates r;
  try {
    r = p.reduce(in.expr, &trace);
  } catch (const InputError&) {
    throw;
  } catch (const IterationCapExceeded& e) {
    throw InputError(std::string("SKEIN_ITERATION_CAP reached: ") + e.what());
  } catch (const std::exception& e) {
    throw InternalError(e.what(), trace_to_json(trace).dump(2));
  }
  bool polynomial_input = true;
  for (const auto& [m, c] : in.expr.terms()) polynomial_input = polynomial_input && c.den().is_monomial();
  for (const auto& [b, c] : r.coords)
    if (polynomial_input && !denominator_covered(c, r.ledger)) throw InternalError("denominator of " + b.id() + " not covered by the ledger", trace_to_json(trace).dump(2));
  if (fmt == "json") {
    if (j.trace)
      emit(out, Json{{"coordinates", coordinates_to_json(r)}, {"trace", trace_to_json(trace)}});
    else
      out << coordinates_to_json(r).dump() << "\n";
  } else {
    out << coordinates_text(r);
    if (j.trace)
      for (const auto& t : trace) out << "  " << t.rule << " [" << t.anchor << "] " << t.monomial << " -> " << t.effect << "\n";
  }
  return 0;
}

ChartConfig config_from_job(const Job& j) {
  ChartConfig c;
  c.kind = j.target;
  if (j.genus) c.genus = j.genus;
  if (c.kind == "two_holed_torus") {
    const auto comma = j.n.find(',');
    if (j.n.empty() || comma == std::string::npos) throw InputError("field 'n' of two_holed_torus must be 'a,b'");
    c.a = parse_int(j.n.substr(0, comma), "n");
    c.b = parse_int(j.n.substr(comma + 1), "n");
  } else if (!j.n.empty()) {
    c.n = parse_int(j.n, "n");
  } else if (c.kind == "sphere" || c.kind == "torus" || c.kind == "twist") {
    throw InputError("field 'n' is required for " + c.kind);
  }
  return c;
}

int cmd_derive(const Job& j, std::ostream& out) {
  ChartRelation r;
  if (!j.file.empty()) {
    const ChartSpec s = chart_from_json(read_json_file(j.file));
    r = commutator_relation(s, flipped_levels(s), s.name);
  } else {
    if (j.target.empty()) throw InputError("field 'config' is required (sphere, sphere0, torus, two_holed_torus, valency2, twist) unless --file is given");
    if (j.genus && j.genus < 2 && j.target != "valency2") throw InputError("field 'genus' must be >= 2");
    r = derive_chart_relation(config_from_job(j));
  }
  if (format_of(j, "text") == "json") {
    emit(out, relation_to_json(r));
  } else {
    out << relation_text(r.relation) << "\n";
    out << "max degree " << r.relation.max_degree << ", head:";
    for (const auto& h : r.heads()) out << "\n  " << h;
    out << "\n";
  }
  return 0;
}

Word word_of(const std::string& s, int g) {
  if (s.find(':') != std::string::npos || s == "trivial") {
    auto e = CurveCatalogEntry::parse(s, g);
    auto w = e.word();
    if (!e.nonseparating() || !w) throw InputError("field 'expr': curve '" + s + "' has no non-separating word form");
    return *w;
  }
  return Word::parse(s);
}

int cmd_normalize(const Job& j, std::ostream& out) {
  std::string start = j.expr, twist = j.twist;
  int g = j.genus, eps = j.eps;
  if (!j.file.empty()) {
    const Json in = read_json_file(j.file);
    g = io_detail::get_int(in, "genus", "normalize file");
    start = io_detail::need(in, "start", "normalize file").get<std::string>();
    twist = in.value("twist", std::string());
    eps = io_detail::get_int(in, "eps", "normalize file", 1);
  }
  if (g < 2) throw InputError("field 'genus' must be given and >= 2");
  if (start.empty()) throw InputError("field 'expr' (start curve) is required");
  const Word c = word_of(start, g);
  const std::string fmt = format_of(j, "json");
  Json res{{"schema", kSchemaVersion}, {"genus", g}, {"start", c.str()}};
  if (twist.empty()) {
    const auto f = as_f_word(c, g);
    if (!f) throw InputError("field 'expr': '" + start + "' is not a non-separating canonical curve; give --twist for a twisted one");
    res["end"] = f->str();
    res["class"] = BasisElement::nonsep(homology_of_word(c, g), 0).id();
  } else {
    const EquivCertificate cert = normalize_to_F(c, parse_twist_gen(twist), eps, g);
    const auto rep = verify_certificate(cert);
    if (!rep.ok) throw InternalError("certificate failed its own check: " + rep.diagnostic, certificate_to_json(cert).dump(2));
    res["twisted"] = cert.start.str();
    res["end"] = cert.end.str();
    res["class"] = BasisElement::nonsep(homology_of_word(cert.end, g), 0).id();
    res["certificate"] = certificate_to_json(cert);
  }
  if (fmt == "json") {
    emit(out, res);
  } else {
    out << res["start"].get<std::string>() << " ~ " << res["end"].get<std::string>() << "  (" << res["class"].get<std::string>() << ")\n";
    if (res.contains("certificate"))
      for (const auto& m : res["certificate"]["moves"])
        out << "  " << m["curve"].get<std::string>() << "^" << m["exponent"].get<int>() << " " << m["justification"].get<std::string>() << "\n";
  }
  return 0;
}

int cmd_verify(const Job& j, std::ostream& out) {
  const std::string fmt = format_of(j, "json");
  Json res{{"schema", kSchemaVersion}, {"check", j.target}};
  bool ok = true;
  std::string dump;
  if (j.target == "confluence") {
    need_genus(j);
    if (!j.seed) throw InputError("field 'seed' is required for randomized verify jobs");
    const int samples = j.n.empty() ? 20 : parse_int(j.n, "n");
    if (samples < 1) throw InputError("field 'n' must be positive");
    const auto rep = verify_confluence(j.genus, samples, *j.seed);
    res["genus"] = j.genus;
    res["seed"] = *j.seed;
    res["samples"] = rep.samples;
    res["mismatches"] = rep.mismatches;
    ok = rep.ok();
    if (!ok) dump = Json(rep.details).dump(2);
  } else if (j.target == "certificate") {
    if (j.file.empty()) throw InputError("field 'file' (certificate JSON) is required");
    const auto rep = verify_certificate(certificate_from_json(read_json_file(j.file)));
    res["ok"] = rep.ok;
    if (!rep.ok) res["diagnostic"] = rep.diagnostic;
    if (fmt == "json")
      emit(out, res);
    else
      out << (rep.ok ? "valid" : "invalid: " + rep.diagnostic) << "\n";
    return rep.ok ? 0 : 1;
  } else if (j.target == "normalizer") {
    need_genus(j);
    int triples = 0;
    for (const Word& c : enumerate_f_words(j.genus))
      for (const auto& t : lickorish_generators(j.genus))
        for (int e : {1, -1}) {
          const auto cert = normalize_to_F(c, t, e, j.genus);
          const auto rep = verify_certificate(cert);
          ++triples;
          if (!rep.ok && ok) {
            ok = false;
            dump = certificate_to_json(cert).dump(2) + "\n" + rep.diagnostic;
          }
        }
    res["genus"] = j.genus;
    res["triples"] = triples;
  } else if (j.target == "twists") {
    need_genus(j);
    int checks = 0;
    const Word rel = surface_relator(j.genus);
    for (const auto& t : lickorish_generators(j.genus))
      for (int e : {1, -1}) {
        for (int i = 1; i <= j.genus; ++i)
          for (Word w : {Word::parse("a" + std::to_string(i)), Word::parse("b" + std::to_string(i))}) {
            ++checks;
            if (apply_twist(apply_twist(w, t, e), t, -e) != w && ok) {
              ok = false;
              dump = t.name() + " not inverted on " + w.str();
            }
          }
        ++checks;
        if (!conjugate(apply_twist(rel, t, e), rel) && ok) {
          ok = false;
          dump = t.name() + " moves the relator";
        }
      }
    res["genus"] = j.genus;
    res["checks"] = checks;
  } else {
    throw InputError("field 'check' must be confluence, certificate, normalizer or twists");
  }
  res["ok"] = ok;
  if (!ok) throw InternalError("verify " + j.target + " failed", dump);
  if (fmt == "json")
    emit(out, res);
  else
    out << j.target << ": ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skein module computations on closed surfaces times a circle"};
  app.require_subcommand(1, 1);
  Job job;
  std::string seed_text;

  auto common = [&](CLI::App* s, bool with_expr) {
    s->add_option("--genus", job.genus, "surface genus");
    s->add_option("--format", job.format, "json or text");
    s->add_option("--file", job.file, "JSON input file");
    if (with_expr) s->add_option("--expr", job.expr, "inline expression");
  };
  auto* basis = app.add_subcommand("basis", "list the basis");
  common(basis, false);
  auto* reduce = app.add_subcommand("reduce", "reduce an expression to basis coordinates");
  common(reduce, true);
  reduce->add_option("--strategy", job.strategy, "leftmost or rightmost");
  reduce->add_flag("--trace", job.trace, "include the rule trace");
  auto* derive = app.add_subcommand("derive-relation", "derive a relation from a commutator chart");
  common(derive, false);
  derive->add_option("config", job.target, "sphere, sphere0, torus, two_holed_torus, valency2, twist");
  derive->add_option("--n", job.n, "configuration parameter ('a,b' for two_holed_torus)");
  auto* norm = app.add_subcommand("normalize-curve", "normalize a curve to the canonical family");
  common(norm, true);
  norm->add_option("--twist", job.twist, "Lickorish twist applied to the start curve, e.g. gamma:1");
  norm->add_option("--eps", job.eps, "twist exponent, 1 or -1");
  auto* verify = app.add_subcommand("verify", "run a verification job");
  common(verify, false);
  verify->add_option("check", job.target, "confluence, certificate, normalizer or twists")->required();
  verify->add_option("--n", job.n, "sample count for confluence");
  verify->add_option("--seed", seed_text, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  }

  std::ostringstream out;
  try {
    if (!seed_text.empty()) {
      try {
        std::size_t pos = 0;
        job.seed = std::stoull(seed_text, &pos);
        if (pos != seed_text.size()) throw std::invalid_argument("seed");
      } catch (const std::exception&) {
        throw InputError("field 'seed' must be a non-negative integer");
      }
    }
    int rc = 0;
    if (*basis)
      rc = cmd_basis(job, out);
    else if (*reduce)
      rc = cmd_reduce(job, out);
    else if (*derive)
      rc = cmd_derive(job, out);
    else if (*norm)
      rc = cmd_normalize(job, out);
    else
      rc = cmd_verify(job, out);
    std::cout << out.str();
    return rc;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\ntrace:\n" << e.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
