#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sigma/distortion.hpp"
#include "sigma/dual_norm.hpp"
#include "sigma/io.hpp"
#include "sigma/oracle.hpp"
#include "sigma/risk.hpp"
#include "sigma/sigma_norm.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitGap = 3;

struct GapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_exponent(const std::string& text, const char* what) {
  if (text == "inf" || text == "Inf" || text == "INF")
    return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = text.size() + 1;
  }
  if (pos != text.size())
    throw std::invalid_argument(std::string(what) + ": bad exponent '" + text + "'");
  return v;
}

std::uint64_t oracle_seed() {
  if (const char* env = std::getenv("SIGMA_RISK_SEED"))
    return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
  return 1;
}

std::string strip_trailing_newline(std::string s) {
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

std::string run_validate_distortion(const std::string& spec) {
  const sigma::Distortion d = sigma::Distortion::parse(spec);
  std::string out = "{\n";
  out += "  \"spec\": \"" + d.to_string() + "\",\n";
  out += "  \"valid\": true,\n";
  out += "  \"u0\": " + sigma::io::format_double(d.u0()) + ",\n";
  out += std::string("  \"bounded\": ") + (d.is_bounded() ? "true" : "false") + "\n";
  return out + "}\n";
}

std::string run_norm(const std::string& data, const std::string& spec, double p,
                     double r) {
  const sigma::RandomVector y = sigma::io::load_dataset(data);
  const sigma::Distortion d = sigma::Distortion::parse(spec);
  std::string out = "{\n";
  out += "  \"norm\": " + sigma::io::format_double(sigma::sigma_norm(y, d, p, r)) + ",\n";
  out += "  \"p_norm\": " + sigma::io::format_double(sigma::p_norm(y, p, r)) + "\n";
  return out + "}\n";
}

std::string run_dual_norm(const std::string& data, const std::string& spec,
                          double p, double r, bool enforce_gap) {
  const sigma::RandomVector z = sigma::io::load_dataset(data);
  const sigma::Distortion d = sigma::Distortion::parse(spec);
  const sigma::DualityCertificate cert = sigma::vector_dual_norm(z, d, p, r);
  if (enforce_gap && cert.gap > 1e-9 + cert.approximation_bound) {
    std::cout << sigma::io::certificate_json(cert);
    throw GapExceeded("certificate gap " + sigma::io::format_double(cert.gap));
  }
  return sigma::io::certificate_json(cert);
}

std::string run_dominates(const std::string& data_zp, const std::string& data_z,
                          const std::string& spec) {
  const sigma::RandomVector zp = sigma::io::load_dataset(data_zp);
  const sigma::RandomVector z = sigma::io::load_dataset(data_z);
  const sigma::Distortion d = sigma::Distortion::parse(spec);
  return sigma::io::dominance_json(sigma::sigma_dominates(zp, z, d));
}

std::string run_risk(const std::string& data_z, const std::string& data_y,
                     double p, double r) {
  const sigma::RandomVector z = sigma::io::load_dataset(data_z);
  const sigma::RandomVector y = sigma::io::load_dataset(data_y);
  const sigma::RiskReport chain = sigma::bound_chain(z, y, r);

  bool have_assignment = true;
  sigma::AssignmentResult assignment{0.0, {}};
  try {
    assignment = sigma::rho_assignment(z, y);
  } catch (const std::invalid_argument&) {
    have_assignment = false;
  }

  std::string out = "{\n";
  if (have_assignment) {
    out += "  \"rho\": " + sigma::io::format_double(assignment.rho) + ",\n";
    out += "  \"assignment\": [";
    for (std::size_t i = 0; i < assignment.permutation.size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(assignment.permutation[i]);
    }
    out += "],\n";
  }
  out += "  \"pairing\": " + sigma::io::format_double(chain.rho) + ",\n";
  out += "  \"pointwise_bound\": " + sigma::io::format_double(chain.pointwise_bound) + ",\n";
  out += "  \"l1_bound\": " + sigma::io::format_double(chain.l1_bound) + ",\n";
  out += "  \"quantile_bound\": " + sigma::io::format_double(chain.quantile_bound) + ",\n";
  out += "  \"K\": " + sigma::io::format_double(chain.K) + ",\n";
  if (p > 0.0 && have_assignment) {
    const sigma::SampleDistortion sd =
        sigma::distortion_from_sample(z, sigma::dual_exponent(r));
    const double rhs =
        sd.scale * sigma::sigma_norm(y, sd.sigma, p, r);
    out += "  \"lipschitz_rhs\": " + sigma::io::format_double(rhs) + ",\n";
  }
  out += std::string("  \"holds\": ") + (chain.holds ? "true" : "false") + "\n";
  return out + "}\n";
}

std::string run_certify(const std::string& data, const std::string& spec,
                        double p, double r, bool with_oracle) {
  const sigma::RandomVector z = sigma::io::load_dataset(data);
  const sigma::Distortion d = sigma::Distortion::parse(spec);
  const sigma::DualityCertificate cert = sigma::vector_dual_norm(z, d, p, r);
  const double tol = 1e-9 + cert.approximation_bound;

  std::string out = "{\n";
  out += "  \"certificate\": " +
         strip_trailing_newline(sigma::io::certificate_json(cert)) + ",\n";
  if (with_oracle && z.atoms() <= 8) {
    const sigma::RandomVector mag =
        sigma::RandomVector::scalar(z.space(), z.magnitudes(sigma::dual_exponent(r)));
    const double lower =
        sigma::oracle::search_dual_pairing(mag, d, p, 2000, oracle_seed());
    out += "  \"oracle_lower_bound\": " + sigma::io::format_double(lower) + ",\n";
    out += std::string("  \"oracle_consistent\": ") +
           (lower <= cert.dual_value + 1e-6 ? "true" : "false") + ",\n";
  }
  out += std::string("  \"gap_within_tolerance\": ") +
         (cert.gap <= tol ? "true" : "false") + "\n";
  out += "}\n";
  if (cert.gap > tol) {
    std::cout << out;
    throw GapExceeded("certificate gap " + sigma::io::format_double(cert.gap));
  }
  return out;
}

std::string run_one_job(const nlohmann::json& job);

std::string run_report(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::invalid_argument("cannot open '" + manifest_path + "'");
  nlohmann::json doc;
  in >> doc;
  if (!doc.is_object() || !doc.contains("jobs") || !doc["jobs"].is_array())
    throw std::invalid_argument("manifest: expected {\"jobs\": [...]}");
  const auto& jobs = doc["jobs"];
  std::vector<std::string> results(jobs.size());

  std::atomic<std::size_t> next{0};
  const unsigned pool = std::min<unsigned>(
      {4u, std::max(1u, std::thread::hardware_concurrency()),
       static_cast<unsigned>(jobs.size() == 0 ? 1 : jobs.size())});
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        results[i] = strip_trailing_newline(run_one_job(jobs[i]));
      } catch (const std::exception& e) {
        results[i] = std::string("{\"error\": \"") + e.what() + "\"}";
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned t = 0; t < pool; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  std::string out = "{\n  \"results\": [\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::istringstream lines(results[i]);
    std::string line, indented;
    while (std::getline(lines, line)) indented += "    " + line + "\n";
    indented = strip_trailing_newline(indented);
    out += indented;
    if (i + 1 < results.size()) out += ",";
    out += "\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string run_one_job(const nlohmann::json& job) {
  const std::string command = job.value("command", "");
  const std::string data = job.value("data", "");
  const std::string data2 = job.value("data2", "");
  const std::string spec = job.value("sigma", "constant");
  const double p = job.value("p", 1.0);
  const double r = job.contains("vecnorm") && job["vecnorm"].is_string()
                       ? parse_exponent(job["vecnorm"].get<std::string>(), "vecnorm")
                       : job.value("vecnorm", 2.0);
  if (command == "validate-distortion") return run_validate_distortion(spec);
  if (command == "norm") return run_norm(data, spec, p, r);
  if (command == "dual-norm") return run_dual_norm(data, spec, p, r, false);
  if (command == "dominates") return run_dominates(data, data2, spec);
  if (command == "risk") return run_risk(data, data2, job.value("p", 0.0), r);
  throw std::invalid_argument("manifest: unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Distortion-weighted norms, dual-norm certificates, and "
      "maximal-correlation risk measures on finite probability spaces"};
  app.require_subcommand(1);

  std::string data, data2, spec = "constant", vecnorm = "2";
  double p = 1.0;
  bool with_oracle = false;

  auto* validate = app.add_subcommand("validate-distortion",
                                      "Parse and validate a distortion spec");
  validate->add_option("spec", spec, "distortion spec")->required();

  auto* norm = app.add_subcommand("norm", "Distortion-weighted norm of a dataset");
  norm->add_option("data", data, "dataset path")->required();
  norm->add_option("--sigma", spec, "distortion spec")->required();
  norm->add_option("--p", p, "norm exponent")->required();
  norm->add_option("--vecnorm", vecnorm, "l_r norm on value rows");

  auto* dual = app.add_subcommand("dual-norm", "Dual norm with optimality certificate");
  dual->add_option("data", data, "dataset path")->required();
  dual->add_option("--sigma", spec, "distortion spec")->required();
  dual->add_option("--p", p, "primal norm exponent")->required();
  dual->add_option("--vecnorm", vecnorm, "l_r norm on value rows");

  auto* dominates = app.add_subcommand("dominates",
                                       "Tail-integral dominance of Z' over Z");
  dominates->add_option("dataZp", data, "dominating dataset path")->required();
  dominates->add_option("dataZ", data2, "dominated dataset path")->required();
  dominates->add_option("--sigma", spec, "distortion spec")->required();

  auto* risk = app.add_subcommand("risk", "Maximal-correlation risk report");
  risk->add_option("dataZ", data, "direction dataset path")->required();
  risk->add_option("dataY", data2, "portfolio dataset path")->required();
  double risk_p = 0.0;
  risk->add_option("--p", risk_p, "exponent for the Lipschitz bound");
  risk->add_option("--vecnorm", vecnorm, "l_r norm on value rows");

  auto* certify = app.add_subcommand("certify",
                                     "Dual-norm certificate with oracle cross-checks");
  certify->add_option("data", data, "dataset path")->required();
  certify->add_option("--sigma", spec, "distortion spec")->required();
  certify->add_option("--p", p, "primal norm exponent")->required();
  certify->add_option("--vecnorm", vecnorm, "l_r norm on value rows");
  certify->add_flag("--oracle", with_oracle, "run brute-force cross-checks");

  auto* report = app.add_subcommand("report", "Batch-process a job manifest");
  report->add_option("manifest", data, "manifest path")->required();

  try {
    app.parse(argc, argv);
    const double r = parse_exponent(vecnorm, "vecnorm");
    if (validate->parsed()) std::cout << run_validate_distortion(spec);
    if (norm->parsed()) std::cout << run_norm(data, spec, p, r);
    if (dual->parsed()) std::cout << run_dual_norm(data, spec, p, r, true);
    if (dominates->parsed()) std::cout << run_dominates(data, data2, spec);
    if (risk->parsed()) std::cout << run_risk(data, data2, risk_p, r);
    if (certify->parsed()) std::cout << run_certify(data, spec, p, r, with_oracle);
    if (report->parsed()) std::cout << run_report(data);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const GapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
