// Command-line driver: runs scenario files through the parser and elaborator,
// reports the dagger construction, runs mean/seminorm experiments, and
// evaluates or classifies characters. Exit codes: 0 = all checks pass or are
// evidence-grade, 1 = a check failed, 2 = usage or parse errors.

#include "flagpar/characters.hpp"
#include "flagpar/flagspec.hpp"
#include "flagpar/induction.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using flagpar::Rational;
using Json = nlohmann::ordered_json;

std::uint64_t effectiveSeed(std::uint64_t cliSeed) {
  if (const char* env = std::getenv("FLAGPAR_SEED")) return std::stoull(env);
  return cliSeed;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Rational parseRational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(flagpar::Int(text));
  return Rational(flagpar::Int(text.substr(0, slash)),
                  flagpar::Int(text.substr(slash + 1)));
}

std::vector<Rational> parseRationalList(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parseRational(item));
  return out;
}

flagpar::TailFamily parseTail(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("--tail", "expected rule:params, e.g. const:1/2");
  std::string rule = text.substr(0, colon);
  auto params = parseRationalList(text.substr(colon + 1));
  flagpar::TailFamily f;
  if (rule == "const") {
    if (params.size() != 1) throw CLI::ValidationError("--tail", "const takes one value");
    f.rule = flagpar::TailRule::Constant;
    f.t = params[0];
  } else if (rule == "geom") {
    if (params.size() != 3)
      throw CLI::ValidationError("--tail", "geom takes t,a,r");
    f = {flagpar::TailRule::Geometric, params[0], params[1], params[2]};
  } else if (rule == "harm") {
    if (params.size() != 2) throw CLI::ValidationError("--tail", "harm takes t,a");
    f = {flagpar::TailRule::Harmonic, params[0], params[1], Rational(0)};
  } else {
    throw CLI::ValidationError("--tail", "rule must be const, geom, or harm");
  }
  return f;
}

Json reportJson(const std::string& scenario, std::uint64_t seed,
                const flagpar::spec::ElaborationReport& rep) {
  Json j;
  j["scenario"] = scenario;
  j["seed"] = seed;
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json e;
    e["name"] = c.target;
    e["kind"] = flagpar::spec::detail::checkKindName(c.kind);
    e["status"] = c.status;
    e["detail"] = c.detail;
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["notes"] = rep.notes;
  return j;
}

int runVerify(const std::string& path, std::uint64_t seed, const std::string& jsonPath) {
  auto doc = flagpar::spec::parse(readFile(path));
  auto rep = flagpar::spec::elaborate(doc, seed);
  for (const auto& n : rep.notes) std::cout << n << "\n";
  for (const auto& c : rep.checks) {
    std::cout << "check " << c.target << " "
              << flagpar::spec::detail::checkKindName(c.kind) << ": " << c.status;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << "\n";
  }
  if (!jsonPath.empty()) {
    std::ofstream out(jsonPath, std::ios::binary);
    out << reportJson(path, seed, rep).dump(2) << "\n";
  }
  return rep.allPassed() ? 0 : 1;
}

int runDagger(const std::string& path) {
  auto doc = flagpar::spec::parse(readFile(path));
  const flagpar::spec::ContextDecl* ctxDecl = nullptr;
  for (const auto& st : doc.statements)
    if (const auto* c = std::get_if<flagpar::spec::ContextDecl>(&st)) ctxDecl = c;
  if (!ctxDecl) {
    std::cerr << "dagger: scenario declares no context\n";
    return 2;
  }
  auto ctx = flagpar::spec::detail::familyContext(ctxDecl->family,
                                                  std::size_t(ctxDecl->truncation));
  auto amb = flagpar::spec::detail::familyAmbient(ctxDecl->family);
  try {
    auto dag = flagpar::buildDagger(ctx, amb);
    std::cout << "context " << ctx.name << "\n"
              << "isotropic rank: " << dag.xPrime.rows() << "\n"
              << "definite complement coordinates: " << dag.qCoords.size() << "\n"
              << "split torus dim: " << dag.aDagger.qDim() << "\n"
              << "compact torus dims: " << dag.tPrime.qDim() << " + "
              << dag.tDoublePrime.qDim() << "\n"
              << "parabolic dim: " << dag.p.qDim() << "\n"
              << "m/a/n dims: " << dag.man.m.qDim() << "/" << dag.man.a.qDim() << "/"
              << dag.man.n.qDim() << "\n"
              << "self-normalizing: "
              << (flagpar::isSelfNormalizing(
                      flagpar::stabilizerAlgebra(
                          std::vector<flagpar::GeneralizedFlag<flagpar::Gaussian>>{
                              dag.flag},
                          amb, ctx.n),
                      amb)
                      ? "yes"
                      : "no")
              << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "dagger construction failed: " << e.what() << "\n";
    return 1;
  }
}

int runInduce(const std::string& path, std::size_t level, std::size_t samples,
              std::uint64_t seed) {
  (void)readFile(path);  // scenario must exist and parse
  auto doc = flagpar::spec::parse(readFile(path));
  (void)doc;
  auto mean = flagpar::haarMean(level, samples, seed);
  double one = mean.evaluate([](const Eigen::MatrixXcd&) { return 1.0; });
  auto sq = mean.evaluateWithError(
      [](const Eigen::MatrixXcd& u) { return std::norm(u(0, 0)); });
  std::cout << "level " << level << ", samples " << samples << ", seed " << seed << "\n";
  std::cout << "mean(1) = " << one << "\n";
  std::cout << "E|u11|^2 = " << sq.first << " (expected " << 1.0 / double(level)
            << ", stderr " << sq.second << ")\n";
  bool ok = one == 1.0 && std::abs(sq.first - 1.0 / double(level)) < 4 * sq.second;
  if (level == 2) {
    flagpar::InducingDatum datum;
    datum.tauWeight = 1;
    double nu =
        flagpar::seminorm(mean, datum, flagpar::matrixCoefficientSection(1));
    std::cout << "seminorm of the weight-1 coefficient section = " << nu << "\n";
  }
  std::cout << (ok ? "evidence: within 4 sigma\n" : "FAILED: outside 4 sigma\n");
  return ok ? 0 : 1;
}

int runVoiculescu(const std::string& coeffs, int lo, const std::string& evalDet) {
  flagpar::VoiculescuSequence seq{lo, parseRationalList(coeffs)};
  auto res = flagpar::voiculescuCheck(seq);
  if (!res.ok) {
    std::cout << "not positive: " << res.failing << "\n";
    return 1;
  }
  std::cout << "minor positivity: ok\n";
  if (!evalDet.empty()) {
    // evaluate on a diagonal unitary given as comma-separated phases (turns)
    auto phases = parseRationalList(evalDet);
    Eigen::MatrixXcd x =
        Eigen::MatrixXcd::Zero(Eigen::Index(phases.size()), Eigen::Index(phases.size()));
    for (std::size_t i = 0; i < phases.size(); ++i)
      x(Eigen::Index(i), Eigen::Index(i)) =
          std::polar(1.0, 2 * 3.14159265358979323846 * flagpar::toDouble(phases[i]));
    auto v = flagpar::voiculescuChar(seq, x);
    std::cout << "value = " << v.real() << (v.imag() < 0 ? " - " : " + ")
              << std::abs(v.imag()) << "i\n";
  }
  return 0;
}

int runPsiB(const std::string& prefix, const std::vector<std::string>& tails,
            bool classify) {
  flagpar::DiagonalBDescriptor b;
  if (!prefix.empty()) b.prefix = parseRationalList(prefix);
  for (const auto& t : tails) b.tails.push_back(parseTail(t));
  if (b.tails.empty()) b.tails.push_back({flagpar::TailRule::Constant, Rational(0), 0, 0});
  if (classify) {
    auto c = flagpar::classifyPsiB(b);
    std::cout << flagpar::factorTypeName(c.type) << "\n";
    for (const auto& cert : c.certificates) std::cout << "  " << cert << "\n";
    return 0;
  }
  // without --classify: report a Gram positivity spot check on a truncation
  auto diag = b.truncate(6);
  Eigen::MatrixXcd bm = Eigen::MatrixXcd::Zero(6, 6);
  for (int i = 0; i < 6; ++i) bm(i, i) = diag[std::size_t(i)];
  std::mt19937_64 rng(effectiveSeed(42));
  std::vector<Eigen::MatrixXcd> samples;
  for (int s = 0; s < 20; ++s) samples.push_back(flagpar::haarUnitary(6, rng));
  double minEig = flagpar::positiveTypeCheck(
      [&](const Eigen::MatrixXcd& x) { return flagpar::psiB(bm, x); }, samples);
  std::cout << "min Gram eigenvalue on a 20-sample truncation: " << minEig << "\n";
  return minEig >= -1e-10 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenario verifier and experiment driver for flag-parabolic models"};
  app.require_subcommand(1);

  std::string file, jsonPath;
  std::uint64_t seed = 42;

  auto* verify = app.add_subcommand("verify", "elaborate a scenario and run its checks");
  verify->add_option("file", file, "scenario file (.fps)")->required();
  verify->add_option("--seed", seed, "random seed for evidence checks");
  verify->add_option("--json", jsonPath, "also write a JSON report");

  auto* report = app.add_subcommand("report", "verify and write a JSON report");
  report->add_option("file", file, "scenario file (.fps)")->required();
  report->add_option("--seed", seed, "random seed for evidence checks");
  report->add_option("--json", jsonPath, "JSON output path")->required();

  auto* dagger = app.add_subcommand("dagger", "report the minimal parabolic construction");
  dagger->add_option("file", file, "scenario file (.fps)")->required();

  std::size_t level = 2, samples = 10000;
  auto* induce = app.add_subcommand("induce", "mean and seminorm experiment");
  induce->add_option("file", file, "scenario file (.fps)")->required();
  induce->add_option("--level", level, "unitary group level n");
  induce->add_option("--samples", samples, "Monte-Carlo sample count");
  induce->add_option("--seed", seed, "sampling seed");

  auto* character = app.add_subcommand("character", "character evaluation");
  character->require_subcommand(1);
  std::string coeffs, evalPhases, prefix;
  int lo = 0;
  auto* voic = character->add_subcommand("voiculescu", "bilateral-sequence character");
  voic->add_option("--coeffs", coeffs, "comma-separated rational coefficients")
      ->required();
  voic->add_option("--lo", lo, "index of the first coefficient");
  voic->add_option("--eval", evalPhases,
                   "evaluate on diag unitary with these phases (turns)");
  std::vector<std::string> tails;
  bool classify = false;
  auto* psib = character->add_subcommand("psib", "determinant-type functional");
  psib->add_option("--prefix", prefix, "comma-separated prefix entries in [0,1]");
  psib->add_option("--tail", tails, "tail family rule:params (repeatable)");
  psib->add_flag("--classify", classify, "print the symbolic factor type");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) return runVerify(file, effectiveSeed(seed), jsonPath);
    if (*report) return runVerify(file, effectiveSeed(seed), jsonPath);
    if (*dagger) return runDagger(file);
    if (*induce) return runInduce(file, level, samples, effectiveSeed(seed));
    if (*voic) return runVoiculescu(coeffs, lo, evalPhases);
    if (*psib) return runPsiB(prefix, tails, classify);
  } catch (const flagpar::spec::SpecError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
