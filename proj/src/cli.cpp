#include "blochjac/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "blochjac/fixtures.hpp"
#include "blochjac/spectral.hpp"

namespace blochjac::cli {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

ojson rat_poly_json(const RatPoly& p) {
  ojson c = ojson::array();
  for (const Rational& x : p.coeffs()) c.push_back(x.str());
  return {{"coefficients", c}, {"text", to_string(p)}};
}

// Polynomial in τ (or ν) with z-polynomial coefficients, lowest power first.
ojson bi_poly_json(const BiPoly& p, const std::string& var) {
  ojson terms = ojson::array();
  for (int k = 0; k <= p.degree(); ++k) {
    ojson t = rat_poly_json(p[k]);
    t["power"] = k;
    terms.push_back(t);
  }
  return {{"variable", var}, {"terms", terms}};
}

ojson cplx_json(cplx v) { return ojson::array({v.real(), v.imag()}); }

ojson clusters_json(const std::vector<RootCluster>& cs) {
  ojson out = ojson::array();
  for (const RootCluster& c : cs) out.push_back({{"value", c.value.real()}, {"multiplicity", c.multiplicity}});
  return out;
}

ojson kinds_json(const std::vector<EdgeKind>& ks) {
  ojson out = ojson::array();
  for (EdgeKind k : ks) out.push_back(to_string(k));
  return out;
}

ojson determinant_json(const CharDeterminant& cd) {
  ojson q = ojson::array();
  for (int k = 0; k <= cd.m; ++k) {
    ojson t = rat_poly_json(cd.q.at(k));
    t["k"] = k;
    q.push_back(t);
  }
  return {{"c", cd.c.str()}, {"D", bi_poly_json(cd.D, "tau")}, {"q", q}};
}

ojson bands_json(const BandStructure& bs, const CharDeterminant& cd, const SurfacePoly& sp) {
  ojson segs = ojson::array();
  for (const Segment& s : bs.segments) segs.push_back({{"lo", s.lo}, {"hi", s.hi}, {"multiplicity", s.multiplicity}});
  ojson branches = ojson::array();
  for (const auto& bands : bs.branch_bands) {
    ojson b = ojson::array();
    for (const auto& [lo, hi] : bands) b.push_back(ojson::array({lo, hi}));
    branches.push_back(b);
  }
  ojson edges = ojson::array();
  for (const Edge& e : bs.edges) edges.push_back({{"value", e.value}, {"kinds", kinds_json(e.kinds)}, {"branches", e.branches}});

  const GapReport gr = classify_gaps(bs, sp);
  ojson gaps = ojson::array();
  for (const Gap& g : gr.gaps)
    gaps.push_back({{"lo", g.lo}, {"hi", g.hi}, {"kind", to_string(g.kind)}, {"lo_kinds", kinds_json(g.lo_kinds)},
                    {"hi_kinds", kinds_json(g.hi_kinds)}});
  ojson ri = ojson::array();
  for (const ResonanceInterval& r : gr.resonance_intervals)
    ri.push_back({{"lo", r.lo}, {"hi", r.hi}, {"inside_spectral_gap", r.inside_spectral_gap}});

  return {{"segments", segs},
          {"branch_bands", branches},
          {"edges", edges},
          {"gaps", gaps},
          {"resonance_intervals", ri},
          {"periodic_eigenvalues", clusters_json(periodic_eigs(cd))},
          {"antiperiodic_eigenvalues", clusters_json(antiperiodic_eigs(cd))}};
}

ojson checks_json(const IdentityReport& r) {
  ojson out = ojson::array();
  for (const IdentityCheck& c : r.checks)
    out.push_back({{"name", c.name},
                   {"applicable", c.applicable},
                   {"exact", c.exact},
                   {"passed", c.passed},
                   {"residual", c.residual},
                   {"detail", c.detail}});
  return out;
}

Rational parse_exact(const json& v, const std::string& where, std::vector<std::string>& errs) {
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      errs.push_back(where + ": " + e.what());
      return Rational(0);
    }
  }
  if (v.is_number_integer()) return Rational(v.get<long long>());
  errs.push_back(where + ": expected a decimal string");
  return Rational(0);
}

RatMatrix parse_matrix(const json& v, int m, const std::string& where, std::vector<std::string>& errs) {
  if (!v.is_array() || static_cast<int>(v.size()) != m) {
    errs.push_back(where + ": expected " + std::to_string(m) + " rows");
    return RatMatrix(m, m);
  }
  RatMatrix out(m, m);
  for (int i = 0; i < m; ++i) {
    const json& row = v[i];
    if (!row.is_array() || static_cast<int>(row.size()) != m) {
      errs.push_back(where + " row " + std::to_string(i) + ": expected " + std::to_string(m) + " entries");
      continue;
    }
    for (int j = 0; j < m; ++j)
      out(i, j) = parse_exact(row[j], where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", errs);
  }
  return out;
}

void check_schema(const json& doc, std::vector<std::string>& errs) {
  if (!doc.is_object()) throw DocumentError({"document must be a JSON object"});
  if (doc.contains("schema") && doc["schema"] != kSchema)
    errs.push_back("unsupported schema " + doc["schema"].dump() + ", expected \"" + kSchema + "\"");
}

int positive_int(const json& doc, const char* key, std::vector<std::string>& errs) {
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 1 ||
      doc[key].get<long long>() > 64) {
    errs.push_back(std::string("field \"") + key + "\" must be an integer in 1..64");
    return 0;
  }
  return doc[key].get<int>();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_angle(item));
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_real(const std::string& s) {
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: \"" + s + "\"");
  }
  if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: \"" + s + "\"");
  return v;
}

// Shared state for one invocation.
struct Session {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> args;
  std::string input = "-";
  std::string bytes;

  json read_input() {
    if (input == "-") {
      std::ostringstream ss;
      ss << in.rdbuf();
      bytes = ss.str();
    } else {
      std::ifstream f(input, std::ios::binary);
      if (!f) throw DocumentError({"cannot open " + input});
      std::ostringstream ss;
      ss << f.rdbuf();
      bytes = ss.str();
    }
    try {
      return json::parse(bytes);
    } catch (const json::parse_error& e) {
      throw DocumentError({std::string("malformed JSON: ") + e.what()});
    }
  }

  ojson envelope(const std::string& name) const {
    ojson cmd = {{"name", name}, {"args", args}};
    return {{"schema", kSchema}, {"command", cmd}, {"input_digest", digest(bytes)}, {"tool_version", kToolVersion}};
  }

  void emit(const ojson& doc) const { out << doc.dump(2) << "\n"; }

  int fail(const std::string& name, int code, const std::string& kind, const std::string& message,
           const ojson& extra = ojson::object()) const {
    ojson doc = envelope(name);
    ojson e = {{"kind", kind}, {"message", message}};
    for (auto it = extra.begin(); it != extra.end(); ++it) e[it.key()] = it.value();
    doc["error"] = e;
    emit(doc);
    err << "blochjac " << name << ": " << message << "\n";
    return code;
  }
};

struct Flags {
  int grid = 257;
  double tol = 1e-9;
  std::string z;
  std::string z_grid;
  unsigned seed = 1;
  std::string kappas;
  std::string rule = "ascending";
  std::string name;
  std::string t = "1";
  std::string beta = "1";
  std::string alpha = "1,0,-1,0";
  int p = 2;
  int m = 2;
};

ojson lyapunov_point(const SurfacePoly& sp, cplx z) {
  const BranchValues bv = lyapunov_at(sp, z);
  ojson branches = ojson::array();
  for (size_t j = 0; j < bv.values.size(); ++j)
    branches.push_back({{"value", cplx_json(bv.values[j])}, {"real", static_cast<bool>(bv.real[j])}});
  ojson mult = ojson::array();
  for (const MultiplierPair& mp : multipliers_at(sp, z))
    mult.push_back({{"tau", cplx_json(mp.tau)},
                    {"tau_inv", cplx_json(mp.tau_inv)},
                    {"abs_tau", std::abs(mp.tau)},
                    {"on_circle", mp.on_circle}});
  return {{"z", cplx_json(z)}, {"branches", branches}, {"multipliers", mult}};
}

PeriodicOperator make_example(const Flags& f) {
  if (f.name == "example1-diag") {
    auto parts = split(f.alpha, ',');
    if (parts.size() != 4) throw std::invalid_argument("--alpha needs 4 comma-separated values");
    std::array<Rational, 4> a;
    for (int i = 0; i < 4; ++i) a[i] = Rational::parse(parts[i]);
    return example1_diag(a);
  }
  if (f.name == "example2-const") return example2_const(Rational::parse(f.beta));
  if (f.name == "example3") return example3(Rational::parse(f.t));
  if (f.name == "example4") return example4(Rational::parse(f.t));
  if (f.name == "free") {
    if (f.p < 1 || f.m < 1 || f.p > 64 || f.m > 64) throw std::invalid_argument("--p and --m must be in 1..64");
    return free_operator(f.p, f.m);
  }
  throw std::invalid_argument("unknown example \"" + f.name +
                              "\" (expected example1-diag, example2-const, example3, example4, free)");
}

int dispatch(Session& s, const std::string& cmd, const Flags& f) {
  try {
    if (cmd == "example") {
      s.bytes.clear();
      s.emit(operator_to_json(make_example(f)));
      return ok;
    }
    const json doc = s.read_input();
    if (cmd == "recover") {
      const SpectralData sd = spectral_data_from_json(doc);
      const Recovery r = recover_determinant(sd);
      ojson payload = {{"p", r.p}, {"m", r.m}, {"c", r.c}, {"q", r.q}, {"residuals", r.residuals}};
      ojson spectrum = ojson::array();
      for (const auto& [lo, hi] : recovered_spectrum(r)) spectrum.push_back(ojson::array({lo, hi}));
      payload["spectrum"] = spectrum;
      if (r.exact) {
        payload["exact"] = determinant_json(*r.exact);
        const SurfacePoly sp = surface_poly(*r.exact);
        payload["bands"] = bands_json(band_structure(*r.exact, sp), *r.exact, sp);
      } else {
        payload["exact"] = nullptr;
        payload["bands"] = nullptr;
      }
      ojson out = s.envelope(cmd);
      out["payload"] = payload;
      s.emit(out);
      return ok;
    }

    const PeriodicOperator op = operator_from_json(doc);
    ojson out = s.envelope(cmd);
    if (cmd == "spectral-data") {
      std::vector<double> kappas = parse_list(f.kappas);
      if (f.kappas.empty()) {
        const std::vector<double> battery = {0, M_PI, M_PI / 2, M_PI / 3, M_PI / 4, M_PI / 5, M_PI / 6};
        if (op.m + 1 > static_cast<int>(battery.size())) throw std::invalid_argument("pass --kappas for m > 6");
        kappas.assign(battery.begin(), battery.begin() + op.m + 1);
      }
      SubsetRule rule = SubsetRule::ascending;
      if (f.rule == "descending") rule = SubsetRule::descending;
      else if (f.rule == "random") rule = SubsetRule::random;
      else if (f.rule != "ascending") throw std::invalid_argument("--rule must be ascending, descending or random");
      s.emit(spectral_data_to_json(forward_spectral_data(op, kappas, rule, f.seed)));
      return ok;
    }

    if (cmd == "verify") {
      const IdentityReport ids = verify_identities(op, f.seed);
      const CharDeterminant cd = char_determinant(op);
      const IdentityReport asym = leading_asymptotics(cd, surface_poly(cd), op);
      const bool good = ids.ok() && asym.ok();
      out["payload"] = {{"ok", good}, {"seed", f.seed}, {"identities", checks_json(ids)},
                        {"asymptotics", checks_json(asym)}};
      s.emit(out);
      if (!good) {
        for (const auto* r : {&ids, &asym})
          for (const IdentityCheck& c : r->checks)
            if (c.applicable && !c.passed) s.err << "failed: " << c.name << " residual " << c.residual << "\n";
        return verification;
      }
      return ok;
    }

    const CharDeterminant cd = char_determinant(op);
    const SurfacePoly sp = surface_poly(cd);
    if (cmd == "bands") {
      BandOptions opt;
      opt.grid = f.grid;
      opt.tol = f.tol;
      if (opt.grid < 2) throw std::invalid_argument("--grid must be >= 2");
      if (!(opt.tol > 0)) throw std::invalid_argument("--tol must be positive");
      ojson payload = bands_json(band_structure(op, opt), cd, sp);
      payload["determinant"] = determinant_json(cd);
      out["payload"] = payload;
    } else if (cmd == "resonances") {
      const ResonancePoly rp = resonance_poly(sp);
      const ResonanceSet rs = resonances(sp);
      ojson zeros = ojson::array();
      for (const RootCluster& c : rs.clusters)
        zeros.push_back({{"value", cplx_json(c.value)},
                         {"multiplicity", c.multiplicity},
                         {"real", std::fabs(c.value.imag()) <= 1e-9 * (1 + std::fabs(c.value.real()))}});
      ojson phi = ojson::array();
      for (const RatPoly& ph : sp.phi) phi.push_back(rat_poly_json(ph));
      out["payload"] = {{"rho", rat_poly_json(rp.rho)}, {"degenerate", rp.degenerate}, {"zeros", zeros},
                        {"surface", {{"phi", phi}, {"Phi", bi_poly_json(sp.Phi, "nu")}}}};
    } else if (cmd == "lyapunov") {
      ojson points = ojson::array();
      if (!f.z.empty() == !f.z_grid.empty()) throw std::invalid_argument("pass exactly one of --z and --z-grid");
      if (!f.z.empty()) {
        auto parts = split(f.z, ',');
        if (parts.empty() || parts.size() > 2) throw std::invalid_argument("--z expects re or re,im");
        points.push_back(lyapunov_point(sp, cplx(parse_real(parts[0]), parts.size() == 2 ? parse_real(parts[1]) : 0.0)));
      } else {
        auto parts = split(f.z_grid, ':');
        if (parts.size() != 3) throw std::invalid_argument("--z-grid expects lo:hi:N");
        const double lo = parse_real(parts[0]), hi = parse_real(parts[1]);
        const double n = parse_real(parts[2]);
        if (n < 1 || n > 100000 || n != std::floor(n)) throw std::invalid_argument("--z-grid N must be in 1..100000");
        const int count = static_cast<int>(n);
        for (int i = 0; i < count; ++i)
          points.push_back(lyapunov_point(sp, lo + (count == 1 ? 0.0 : (hi - lo) * i / (count - 1))));
      }
      out["payload"] = {{"points", points}};
    }
    s.emit(out);
    return ok;
  } catch (const DocumentError& e) {
    return s.fail(cmd, invalid_input, "invalid_input", join(e.violations, "; "), {{"violations", e.violations}});
  } catch (const InconsistentDataError& e) {
    return s.fail(cmd, inconsistent_data, "inconsistent_spectral_data", e.what(), {{"residuals", e.residuals}});
  } catch (const ConsistencyError& e) {
    return s.fail(cmd, consistency, "internal_consistency", e.what());
  } catch (const RootFindingError& e) {
    return s.fail(cmd, consistency, "internal_consistency", e.what());
  } catch (const std::invalid_argument& e) {
    return s.fail(cmd, invalid_input, "invalid_input", e.what(), {{"violations", ojson::array({e.what()})}});
  } catch (const std::exception& e) {
    return s.fail(cmd, failure, "error", e.what());
  }
}

}  // namespace

DocumentError::DocumentError(std::vector<std::string> v)
    : std::invalid_argument(v.empty() ? "invalid document" : v.front()), violations(std::move(v)) {}

ojson operator_to_json(const PeriodicOperator& op) {
  auto mat = [](const RatMatrix& a) {
    ojson rows = ojson::array();
    for (int i = 0; i < a.rows(); ++i) {
      ojson row = ojson::array();
      for (int j = 0; j < a.cols(); ++j) row.push_back(a(i, j).decimal_str());
      rows.push_back(row);
    }
    return rows;
  };
  ojson a = ojson::array(), b = ojson::array();
  for (const RatMatrix& x : op.a) a.push_back(mat(x));
  for (const RatMatrix& x : op.b) b.push_back(mat(x));
  return {{"schema", kSchema}, {"p", op.p}, {"m", op.m}, {"a", a}, {"b", b}};
}

PeriodicOperator operator_from_json(const json& doc) {
  std::vector<std::string> errs;
  check_schema(doc, errs);
  PeriodicOperator op;
  op.p = positive_int(doc, "p", errs);
  op.m = positive_int(doc, "m", errs);
  if (!errs.empty()) throw DocumentError(errs);
  for (const char* key : {"a", "b"}) {
    if (!doc.contains(key) || !doc[key].is_array() || static_cast<int>(doc[key].size()) != op.p) {
      errs.push_back(std::string("field \"") + key + "\" must list " + std::to_string(op.p) + " matrices");
      continue;
    }
    auto& dest = key[0] == 'a' ? op.a : op.b;
    for (int n = 0; n < op.p; ++n)
      dest.push_back(parse_matrix(doc[key][n], op.m, std::string(key) + "_" + std::to_string(n + 1), errs));
  }
  if (!errs.empty()) throw DocumentError(errs);
  auto v = validate(op);
  if (!v.empty()) throw DocumentError(v);
  return op;
}

ojson spectral_data_to_json(const SpectralData& sd) {
  ojson lambda = ojson::array();
  for (const auto& l : sd.lambda) {
    ojson row = ojson::array();
    for (cplx v : l) {
      if (v.imag() == 0) row.push_back(v.real());
      else row.push_back(cplx_json(v));
    }
    lambda.push_back(row);
  }
  return {{"schema", kSchema}, {"p", sd.p}, {"m", sd.m}, {"kappas", sd.kappas}, {"lambda", lambda}};
}

SpectralData spectral_data_from_json(const json& doc) {
  std::vector<std::string> errs;
  check_schema(doc, errs);
  SpectralData sd;
  sd.p = positive_int(doc, "p", errs);
  sd.m = positive_int(doc, "m", errs);
  auto number = [&](const json& v, const std::string& where) -> double {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      try {
        return parse_angle(v.get<std::string>());
      } catch (const std::exception&) {
      }
    }
    errs.push_back(where + ": expected a number");
    return 0;
  };
  if (!doc.contains("kappas") || !doc["kappas"].is_array()) {
    errs.push_back("field \"kappas\" must be an array");
  } else {
    for (size_t i = 0; i < doc["kappas"].size(); ++i) sd.kappas.push_back(number(doc["kappas"][i], "kappas[" + std::to_string(i) + "]"));
  }
  if (!doc.contains("lambda") || !doc["lambda"].is_array()) {
    errs.push_back("field \"lambda\" must be an array of arrays");
  } else {
    for (size_t j = 0; j < doc["lambda"].size(); ++j) {
      const json& row = doc["lambda"][j];
      std::vector<cplx> vals;
      if (!row.is_array()) {
        errs.push_back("lambda[" + std::to_string(j) + "] must be an array");
      } else {
        for (size_t i = 0; i < row.size(); ++i) {
          const std::string where = "lambda[" + std::to_string(j) + "][" + std::to_string(i) + "]";
          if (row[i].is_array() && row[i].size() == 2)
            vals.emplace_back(number(row[i][0], where), number(row[i][1], where));
          else
            vals.emplace_back(number(row[i], where), 0.0);
        }
      }
      sd.lambda.push_back(vals);
    }
  }
  if (!errs.empty()) throw DocumentError(errs);
  try {
    check_spectral_data(sd);
  } catch (const std::invalid_argument& e) {
    throw DocumentError({e.what()});
  }
  return sd;
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

double parse_angle(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  const size_t pi = text.find("pi");
  if (pi == std::string::npos) return parse_real(text);
  double factor = 1;
  const std::string head = text.substr(0, pi);
  if (head == "-") factor = -1;
  else if (!head.empty() && head != "+") factor = parse_real(head.back() == '*' ? head.substr(0, head.size() - 1) : head);
  std::string tail = text.substr(pi + 2);
  double den = 1;
  if (!tail.empty()) {
    if (tail[0] != '/') throw std::invalid_argument("bad angle \"" + raw + "\"");
    den = parse_real(tail.substr(1));
    if (den == 0) throw std::invalid_argument("bad angle \"" + raw + "\"");
  }
  return factor * M_PI / den;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral analysis of periodic block Jacobi operators", "blochjac"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  Flags f;
  Session s{in, out, err, args, "-", ""};

  auto input_opt = [&](CLI::App* c) { c->add_option("input", s.input, "operator document (- for stdin)"); };

  auto* bands = app.add_subcommand("bands", "spectral bands, edges and gaps");
  input_opt(bands);
  bands->add_option("--grid", f.grid, "Floquet cross-check samples on [0, pi]");
  bands->add_option("--tol", f.tol, "edge candidate merge tolerance");

  auto* res = app.add_subcommand("resonances", "resonance polynomial and its zeros");
  input_opt(res);

  auto* lya = app.add_subcommand("lyapunov", "Lyapunov branches and multipliers at z");
  input_opt(lya);
  lya->add_option("--z", f.z, "re[,im]");
  lya->add_option("--z-grid", f.z_grid, "lo:hi:N real grid");

  auto* rec = app.add_subcommand("recover", "recover D from spectral data");
  rec->add_option("input", s.input, "spectral data document (- for stdin)");

  auto* ver = app.add_subcommand("verify", "identity battery");
  input_opt(ver);
  ver->add_option("--seed", f.seed, "seed for randomized checks");

  auto* sdata = app.add_subcommand("spectral-data", "eigenvalue sets for the inverse problem");
  input_opt(sdata);
  sdata->add_option("--kappas", f.kappas, "comma-separated angles, e.g. 0,pi,pi/2");
  sdata->add_option("--rule", f.rule, "ascending, descending or random");
  sdata->add_option("--seed", f.seed, "seed for the random rule");

  auto* ex = app.add_subcommand("example", "emit a built-in operator document");
  ex->add_option("name", f.name, "example1-diag, example2-const, example3, example4, free")->required();
  ex->add_option("--t", f.t, "parameter t (example3, example4)");
  ex->add_option("--beta", f.beta, "parameter beta (example2-const)");
  ex->add_option("--alpha", f.alpha, "a0,a1,a2,a3 (example1-diag)");
  ex->add_option("--p", f.p, "period (free)");
  ex->add_option("--m", f.m, "block size (free)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : invalid_input;
  }
  return dispatch(s, app.get_subcommands().front()->get_name(), f);
}

}  // namespace blochjac::cli
