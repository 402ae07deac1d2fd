#include "wem/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <optional>
#include <sstream>

#include "wem/em1d.hpp"
#include "wem/em_nd.hpp"
#include "wem/errors.hpp"
#include "wem/lattice_groups.hpp"
#include "wem/polytope.hpp"

#ifndef WEM_VERSION
#define WEM_VERSION "unknown"
#endif

namespace wem {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// quadrature targets, echoed in every manifest
constexpr double kRelativeTolerance = 1e-13;
constexpr double kNestedInnerTolerance = 1e-14;

struct Run {
  json input = json::object();
  json xi = nullptr;
  json ambientOrder = nullptr;
  json result;
  int exitCode = kExitOk;
};

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// A flag value that is either inline JSON or the path of a JSON file.
json jsonArgument(const std::string& text, const std::string& what) {
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool inlineJson = first != std::string::npos && (text[first] == '[' || text[first] == '{');
  const std::string body = inlineJson ? text : readFile(text);
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw InputError("malformed " + what + " JSON: " + e.what());
  }
}

Rational rationalFrom(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw InputError("expected a rational given as an integer or \"p/q\"");
}

json toJson(const Rational& r) { return r.toString(); }

json toJson(const Vector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(toJson(x));
  return out;
}

json toJson(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json toJson(const Cyclotomic& c) {
  json coefficients = json::array();
  for (const auto& x : c.coefficients()) coefficients.push_back(toJson(x));
  return json{{"order", c.order()}, {"coefficients", coefficients}};
}

MultiPolynomial polynomialFrom(const json& j, int n) {
  if (!j.is_array()) throw InputError("a polynomial is a list of {exponents, coefficient} records");
  MultiPolynomial p(n);
  try {
    for (const auto& term : j) {
      const auto e = term.at("exponents").get<Exponent>();
      if (static_cast<int>(e.size()) != n) {
        throw InputError("monomial has " + std::to_string(e.size()) + " exponents, expected " + std::to_string(n));
      }
      for (int x : e) {
        if (x < 0) throw InputError("negative exponent in polynomial");
      }
      p.addTerm(e, rationalFrom(term.at("coefficient")));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed polynomial record: ") + e.what());
  }
  return p;
}

std::vector<double> doublesFrom(const json& j, int n, const std::string& what) {
  if (j.is_number()) return std::vector<double>(static_cast<std::size_t>(n), j.get<double>());
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw InputError(what + " must be a number or a list of " + std::to_string(n) + " numbers");
  }
  return j.get<std::vector<double>>();
}

// {"family": "product", "center": [...], "radius": r | [...]} or {"family": "centroid", "scale": s},
// with an optional polynomial "multiplier".
SmoothFunction bumpFrom(const json& desc, const Polytope& polytope) {
  const int n = polytope.dimension();
  try {
    const std::string family = desc.value("family", "product");
    std::vector<double> center, radius;
    if (family == "product") {
      center = doublesFrom(desc.at("center"), n, "center");
      radius = doublesFrom(desc.at("radius"), n, "radius");
    } else if (family == "centroid") {
      center.assign(static_cast<std::size_t>(n), 0.0);
      for (const auto& v : polytope.vertices()) {
        for (int i = 0; i < n; ++i) center[static_cast<std::size_t>(i)] += v.location[static_cast<std::size_t>(i)].toDouble();
      }
      for (auto& c : center) c /= static_cast<double>(polytope.vertices().size());
      radius = doublesFrom(desc.at("scale"), n, "scale");
    } else {
      throw InputError("unknown bump family '" + family + "'");
    }
    for (double r : radius) {
      if (!(r > 0.0)) throw InputError("bump radius must be positive");
    }
    if (desc.contains("multiplier")) return SmoothFunction(center, radius, polynomialFrom(desc.at("multiplier"), n));
    return SmoothFunction(center, radius);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed bump specification: ") + e.what());
  }
}

std::optional<Vector> xiFrom(const std::string& text, int n) {
  if (text.empty()) return std::nullopt;
  Vector xi;
  std::stringstream s(text);
  std::string part;
  while (std::getline(s, part, ',')) xi.push_back(Rational::parse(part));
  if (static_cast<int>(xi.size()) != n) throw InputError("--xi needs " + std::to_string(n) + " components");
  return xi;
}

struct LoadedPolytope {
  HalfSpaceDescription description;
  Polytope polytope;
};

LoadedPolytope loadPolytope(const std::string& path, Run& run) {
  const std::string text = readFile(path);
  auto description = parseHalfSpaces(text);
  run.input["polytope"] = json::parse(text);
  run.input["polytopeFile"] = path;
  auto polytope = Polytope::validate(description);
  return {std::move(description), std::move(polytope)};
}

std::string rotationString(const Rational& rotation, int ambient) {
  return (rotation * Rational(ambient)).toString() + "/" + std::to_string(ambient);
}

json verticesJson(const Polytope& p) {
  json out = json::array();
  for (const auto& v : p.vertices()) {
    json edges = json::array();
    for (const auto& e : v.edges) edges.push_back(toJson(e));
    out.push_back(json{{"location", toJson(v.location)}, {"facets", v.facets}, {"edges", edges}});
  }
  return out;
}

json contributionsJson(const std::vector<Contribution>& contributions, bool exact) {
  json out = json::array();
  for (const auto& c : contributions) {
    json row{{"face", c.face}, {"facets", c.facets}, {"element", c.element}, {"numeric", toJson(c.numeric)}};
    if (exact) row["exact"] = toJson(c.exact);
    out.push_back(std::move(row));
  }
  return out;
}

std::string operatorName(const Rational& q) {
  if (q == Rational(1, 2)) return "L";
  if (q == Rational(1)) return "Todd";
  if (q.isZero()) return "Todd(-S)";
  return "chi_q";
}

void cmdVerify(const std::string& path, Run& run) {
  const auto [description, p] = loadPolytope(path, run);
  run.result = json{{"valid", true},
                    {"dimension", p.dimension()},
                    {"facetCount", p.facetCount()},
                    {"vertices", verticesJson(p)},
                    {"faceCount", p.faces().size()},
                    {"regular", p.isRegular()}};
}

void cmdSum(const std::string& path, const std::string& q, const std::string& poly, Run& run) {
  const auto [description, p] = loadPolytope(path, run);
  const Rational weight = Rational::parse(q);
  run.input["q"] = q;
  MultiPolynomial f = MultiPolynomial::constant(p.dimension(), Rational(1));
  if (!poly.empty()) {
    const json polyJson = jsonArgument(poly, "polynomial");
    run.input["poly"] = polyJson;
    f = polynomialFrom(polyJson, p.dimension());
  }
  run.result = json{{"q", toJson(weight)}, {"value", toJson(weightedLatticeSum(p, f, weight))}};
}

struct EmOptions {
  std::string polytope, q, poly, bump, xi;
  std::optional<int> k;
  bool compareOracle = false;
  bool regularFastPath = false;
};

void cmdEm(const EmOptions& o, Run& run) {
  const auto [description, p] = loadPolytope(o.polytope, run);
  const Rational q = Rational::parse(o.q);
  run.input["q"] = o.q;
  if (o.k) run.input["k"] = *o.k;
  if (o.poly.empty() == o.bump.empty()) throw InputError("give exactly one of --poly and --bump");
  const GroupData groups(p);
  const Polarization polarization = p.polarize(xiFrom(o.xi, p.dimension()));
  run.xi = toJson(polarization.xi);
  run.ambientOrder = groups.ambientOrder();

  if (!o.poly.empty()) {
    const json polyJson = jsonArgument(o.poly, "polynomial");
    run.input["poly"] = polyJson;
    const auto f = polynomialFrom(polyJson, p.dimension());
    const int exactK = std::max(0, f.totalDegree()) + p.dimension() + 1;
    const int k = o.k.value_or(exactK);
    if (k < 1) throw InputError("--k must be positive");
    const auto main = mainTermPolynomial(p, groups, f, q, k);
    const Rational sum = weightedLatticeSum(p, f, q);
    json result{{"path", "exact"},
                {"operator", operatorName(q)},
                {"q", toJson(q)},
                {"k", k},
                {"exactOrder", exactK},
                {"weightedSum", toJson(sum)},
                {"mainTerm", toJson(main.value)},
                {"mainTermCyclotomic", toJson(main.total)},
                {"remainder", toJson(sum - main.value)},
                {"contributions", contributionsJson(main.contributions, true)}};
    if (o.regularFastPath) {
      const Rational fast = regularMainTerm(p, f, q);
      result["regularFastPath"] = json{{"mainTerm", toJson(fast)}, {"agreesWithGeneric", fast == main.value}};
      if (fast != main.value) run.exitCode = kExitFailure;
    }
    if (o.compareOracle) {
      result["oracleMatch"] = main.value == sum;
      if (main.value != sum) run.exitCode = kExitFailure;
    }
    run.result = std::move(result);
    return;
  }

  if (o.compareOracle) throw InputError("--compare-oracle needs the exact path (--poly)");
  if (o.regularFastPath) throw InputError("--regular-fastpath needs the exact path (--poly)");
  const json bumpJson = jsonArgument(o.bump, "bump");
  run.input["bump"] = bumpJson;
  const auto f = bumpFrom(bumpJson, p);
  const int k = o.k.value_or(3);
  const auto r = smoothEM(p, groups, f, q, k, polarization);
  run.result = json{{"path", "smooth"},
                    {"operator", operatorName(q)},
                    {"q", toJson(q)},
                    {"k", k},
                    {"weightedSum", r.weightedSum},
                    {"mainTerm", toJson(r.mainTerm)},
                    {"remainderByDifference", toJson(r.remainderByDifference)},
                    {"remainderByCones", toJson(r.remainderByCones)},
                    {"vertexRouteMainTerm", toJson(r.vertexRouteMainTerm)},
                    {"restrictedMainTerm", toJson(r.restrictedMainTerm)},
                    {"achievedTolerance", r.quadratureError},
                    {"contributions", contributionsJson(r.contributions, false)}};
}

void cmdGroups(const std::string& path, Run& run) {
  const auto [description, p] = loadPolytope(path, run);
  const GroupData g(p);
  const int ambient = g.ambientOrder();
  run.ambientOrder = ambient;
  json faces = json::array();
  for (int fi = 0; fi < static_cast<int>(p.faces().size()); ++fi) {
    const Face& face = p.faces()[static_cast<std::size_t>(fi)];
    const auto& group = g.group(fi);
    const auto& flat = g.flat(fi);
    json elements = json::array();
    for (int e = 0; e < static_cast<int>(group.elements.size()); ++e) {
      json rotations = json::array();
      for (int j : face.facets) rotations.push_back(rotationString(g.rotation(fi, e, j), ambient));
      elements.push_back(json{{"coordinates", group.elements[static_cast<std::size_t>(e)].coordinates},
                              {"lift", toJson(group.elements[static_cast<std::size_t>(e)].lift)},
                              {"rotations", rotations},
                              {"flat", std::find(flat.begin(), flat.end(), e) != flat.end()}});
    }
    faces.push_back(json{{"facets", face.facets},
                         {"vertices", face.vertices},
                         {"invariantFactors", group.invariantFactors},
                         {"order", group.order()},
                         {"elements", elements}});
  }
  run.result = json{{"ambientOrder", ambient}, {"regular", p.isRegular()}, {"faces", faces}};
}

void cmdDecompose(const std::string& path, const std::string& xi, const std::string& q, Run& run) {
  const auto [description, p] = loadPolytope(path, run);
  const Polarization pol = p.polarize(xiFrom(xi, p.dimension()));
  run.xi = toJson(pol.xi);
  std::optional<Rational> weight;
  if (!q.empty()) {
    weight = Rational::parse(q);
    run.input["q"] = q;
  }
  json cones = json::array();
  for (const auto& pv : pol.vertices) {
    const auto& v = p.vertices()[static_cast<std::size_t>(pv.vertex)];
    json edges = json::array();
    for (const auto& e : pv.edges) edges.push_back(toJson(e));
    json cone{{"vertex", pv.vertex},
              {"apex", toJson(v.location)},
              {"facets", v.facets},
              {"signs", pv.signs},
              {"flips", pv.flips},
              {"sign", pv.flips % 2 == 0 ? 1 : -1},
              {"edges", edges}};
    if (weight) cone["weights"] = toJson(Vector(pv.weights(*weight)));
    cones.push_back(std::move(cone));
  }
  run.result = json{{"xi", toJson(pol.xi)}, {"cones", cones}};
  if (pol.sweepParameter) run.result["sweepParameter"] = *pol.sweepParameter;
}

struct Em1dOptions {
  long a = 0;
  std::optional<long> b;
  std::string q, function, twist;
  int m = 2;
};

json reportJson(const EM1DReport& r) {
  json out{{"kind", r.kind},
           {"q", toJson(r.q)},
           {"a", r.a},
           {"b", r.b ? json(*r.b) : json(nullptr)},
           {"twist", toJson(r.twist.rotation())},
           {"order", r.order},
           {"weightedSum", toJson(r.weightedSum)},
           {"mainTerm", toJson(r.mainTerm)},
           {"remainderByDifference", toJson(r.remainderByDifference)},
           {"remainderByIntegral", toJson(r.remainderByIntegral)},
           {"achievedTolerance", r.quadratureError}};
  if (r.exactWeightedSum) out["exactWeightedSum"] = toJson(*r.exactWeightedSum);
  if (r.exactMainTerm) out["exactMainTerm"] = toJson(*r.exactMainTerm);
  return out;
}

void cmdEm1d(const Em1dOptions& o, Run& run) {
  const Rational q = Rational::parse(o.q);
  const json fn = jsonArgument(o.function, "function");
  run.input = json{{"a", o.a}, {"q", o.q}, {"m", o.m}, {"function", fn}};
  if (o.b) run.input["b"] = *o.b;
  if (o.m < 1) throw InputError("--m must be positive");
  if (o.b && *o.b < o.a) throw InputError("--b must not be smaller than --a");

  if (fn.is_array()) {
    if (!o.b) throw InputError("the polynomial path needs a finite interval (--b)");
    if (!o.twist.empty()) throw InputError("--twist applies to bumps on a ray");
    run.result = reportJson(emInterval(polynomialFrom(fn, 1), o.a, *o.b, q, o.m));
    return;
  }
  double center = 0.0, radius = 1.0;
  std::vector<double> multiplier{1.0};
  try {
    if (fn.value("family", "bump") != "bump") throw InputError("unknown function family");
    center = fn.at("center").get<double>();
    radius = fn.at("radius").get<double>();
    if (fn.contains("multiplier")) multiplier = fn.at("multiplier").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed bump specification: ") + e.what());
  }
  if (!(radius > 0.0)) throw InputError("bump radius must be positive");
  const Smooth1D f = bump1D(center, radius, polynomialMultiplier(multiplier));
  if (o.b) {
    if (!o.twist.empty()) throw InputError("--twist applies to rays only");
    run.result = reportJson(emInterval(f, o.a, *o.b, q, o.m));
  } else if (!o.twist.empty()) {
    run.input["twist"] = o.twist;
    run.result = reportJson(emTwistedRay(f, RootOfUnity(Rational::parse(o.twist)), q, o.m, o.a));
  } else {
    run.result = reportJson(emRay(f, o.a, q, o.m));
  }
}

std::string joined(const std::vector<std::string>& args) {
  std::string s = "wem";
  for (const auto& a : args) s += " " + a;
  return s;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  CLI::App app{"Weighted Euler-Maclaurin formulas on simple integral polytopes", "wem"};
  app.require_subcommand(1);

  std::string polytopeFile;
  auto* verify = app.add_subcommand("verify", "validate a polytope given by half-spaces");
  verify->add_option("polytope", polytopeFile, "polytope JSON file")->required();

  std::string sumQ, sumPoly;
  auto* sum = app.add_subcommand("sum", "exact weighted lattice-point sum of a polynomial");
  sum->add_option("polytope", polytopeFile, "polytope JSON file")->required();
  sum->add_option("--q", sumQ, "facet weight q as p/q")->required();
  sum->add_option("--poly", sumPoly, "polynomial records (inline JSON or file); default 1");

  EmOptions em;
  int emK = 0;
  auto* emCmd = app.add_subcommand("em", "Euler-Maclaurin main term and remainder");
  emCmd->add_option("polytope", em.polytope, "polytope JSON file")->required();
  emCmd->add_option("--q", em.q, "facet weight q as p/q")->required();
  emCmd->add_option("--poly", em.poly, "polynomial records (inline JSON or file)");
  emCmd->add_option("--bump", em.bump, "bump family (inline JSON or file)");
  auto* kOption = emCmd->add_option("--k", emK, "operator truncation order");
  emCmd->add_option("--xi", em.xi, "polarizing covector, comma separated");
  emCmd->add_flag("--compare-oracle", em.compareOracle, "exit 1 unless the main term equals the brute-force sum");
  emCmd->add_flag("--regular-fastpath", em.regularFastPath, "also evaluate prod chi_q on a regular polytope");

  auto* groups = app.add_subcommand("groups", "face groups, characters and flat subsets");
  groups->add_option("polytope", polytopeFile, "polytope JSON file")->required();

  std::string decomposeXi, decomposeQ;
  auto* decompose = app.add_subcommand("decompose", "polar decomposition into signed vertex cones");
  decompose->add_option("polytope", polytopeFile, "polytope JSON file")->required();
  decompose->add_option("--xi", decomposeXi, "polarizing covector, comma separated");
  decompose->add_option("--q", decomposeQ, "also report the facet weights of each cone");

  Em1dOptions em1d;
  em1d.function = R"([{"exponents": [0], "coefficient": 1}])";
  long em1dB = 0;
  auto* em1dCmd = app.add_subcommand("em1d", "one-dimensional weighted Euler-Maclaurin report");
  em1dCmd->add_option("--a", em1d.a, "left endpoint")->required();
  auto* bOption = em1dCmd->add_option("--b", em1dB, "right endpoint; omit for the ray");
  em1dCmd->add_option("--q", em1d.q, "endpoint weight q as p/q")->required();
  em1dCmd->add_option("--m", em1d.m, "order m (k for the twisted ray)");
  em1dCmd->add_option("--function", em1d.function, "polynomial records or a bump (inline JSON or file); default 1");
  em1dCmd->add_option("--twist", em1d.twist, "rotation number of the twist lambda, as p/q");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  Run run;
  json error;
  std::string command;
  try {
    if (verify->parsed()) {
      command = "verify";
      cmdVerify(polytopeFile, run);
    } else if (sum->parsed()) {
      command = "sum";
      cmdSum(polytopeFile, sumQ, sumPoly, run);
    } else if (emCmd->parsed()) {
      command = "em";
      if (kOption->count() > 0) em.k = emK;
      cmdEm(em, run);
    } else if (groups->parsed()) {
      command = "groups";
      cmdGroups(polytopeFile, run);
    } else if (decompose->parsed()) {
      command = "decompose";
      cmdDecompose(polytopeFile, decomposeXi, decomposeQ, run);
    } else if (em1dCmd->parsed()) {
      command = "em1d";
      if (bOption->count() > 0) em1d.b = em1dB;
      cmdEm1d(em1d, run);
    }
  } catch (const InputError& e) {
    error = json{{"type", "input"}, {"message", e.what()}};
    run.exitCode = kExitInput;
  } catch (const ValidationError& e) {
    error = json{{"type", "validation"}, {"kind", e.kind()}, {"message", e.what()}};
    run.exitCode = kExitFailure;
  } catch (const QuadratureError& e) {
    error = json{{"type", "quadrature"}, {"message", e.what()}, {"achievedTolerance", e.achieved()}};
    run.exitCode = kExitFailure;
  } catch (const std::exception& e) {
    error = json{{"type", "failure"}, {"message", e.what()}};
    run.exitCode = kExitFailure;
  }

  const double wall = std::chrono::duration<double>(Clock::now() - start).count();
  json manifest{{"command", joined(args)},
                {"subcommand", command},
                {"arguments", args},
                {"input", run.input},
                {"xi", run.xi},
                {"ambientOrder", run.ambientOrder},
                {"tolerances",
                 {{"exact", 0},
                  {"quadratureRelative", kRelativeTolerance},
                  {"nestedQuadratureRelative", kNestedInnerTolerance}}},
                {"version", WEM_VERSION},
                {"threads", threadCount()},
                {"wallTimeSeconds", wall}};
  json report{{"manifest", manifest}};
  if (error.is_null()) {
    report["result"] = run.result;
  } else {
    report["error"] = error;
    err << "wem " << command << ": " << error["message"].get<std::string>() << "\n";
  }
  report["exitCode"] = run.exitCode;
  out << report.dump(2) << "\n";
  return run.exitCode;
}

}  // namespace wem
