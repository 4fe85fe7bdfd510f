#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "smlorenz/certificate.hpp"
#include "smlorenz/config.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace sml;

namespace {

// exit codes: 0 ok, 1 config/usage, 2 sign not resolved, 3 enclosure or
// certification failure, 4 certificate verification failure, 5 admissibility
enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kSignNotResolved = 2,
  kEnclosure = 3,
  kVerifyFailed = 4,
  kAdmissibility = 5,
};

void apply_threads(const ProofConfig& cfg) {
#ifdef _OPENMP
  int threads = cfg.threads;
  if (const char* env = std::getenv("SMLORENZ_THREADS")) threads = std::atoi(env);
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)cfg;
#endif
}

void write_partial(const std::string& dir, const std::string& stage, const std::string& why) {
  try {
    fs::create_directories(dir);
    write_file_atomic(dir + "/" + stage + ".partial.json",
                      std::string("{\n  \"certified\": false,\n  \"stage\": \"") + stage +
                          "\",\n  \"error\": \"" + why + "\"\n}\n");
  } catch (...) {
  }
}

int classify(const std::exception& e, const std::string& dir, const std::string& stage) {
  std::fprintf(stderr, "error [%s]: %s\n", stage.c_str(), e.what());
  write_partial(dir, stage, e.what());
  if (dynamic_cast<const SignNotResolved*>(&e)) return kSignNotResolved;
  if (dynamic_cast<const AdmissibilityFailed*>(&e)) return kAdmissibility;
  if (dynamic_cast<const VerificationFailed*>(&e)) return kVerifyFailed;
  if (dynamic_cast<const ConfigError*>(&e)) return kUsage;
  return kEnclosure;  // EnclosureFailure, StepLimitExceeded, CertificateRefused, ...
}

void export_eta_tube(const FlowEnclosure& flight, const Interval& a, const std::string& path) {
  const Frame p = sep_frame_P(a);
  FlowEnclosure eta;
  eta.t_final = flight.t_final;
  eta.tube.reserve(flight.tube.size());
  for (const auto& seg : flight.tube) {
    const IVec gamma = ivec(seg.box[3], seg.box[4], seg.box[5]);
    const IVec e = mul(p.fwd, gamma);
    eta.tube.push_back({seg.time, IBox(e.begin(), e.end())});
  }
  write_tube_csv(eta, path);
}

int run_homoclinic(const ProofConfig& cfg, const std::string& out) {
  fs::create_directories(out);
  HomoclinicArtifacts art;
  const HomoclinicCertificate cert = prove_homoclinic(cfg.bracket(), cfg.homoclinic_settings(), &art);
  write_tube_csv(art.tube_left, out + "/tube_left.csv");
  write_tube_csv(art.tube_right, out + "/tube_right.csv");
  write_file_atomic(out + "/homoclinic.json",
                    homoclinic_to_json(cert, {"tube_left.csv", "tube_right.csv"}));
  std::printf("homoclinic certificate issued: orientation %+d, h(a_l) = [%.17g, %.17g], "
              "h(a_r) = [%.17g, %.17g]\n",
              cert.orientation, cert.h_left.lo(), cert.h_left.hi(), cert.h_right.lo(),
              cert.h_right.hi());
  std::printf("wrote %s/homoclinic.json\n", out.c_str());
  return kOk;
}

int run_separatrix(const ProofConfig& cfg, const std::string& hom_path, const std::string& out) {
  const std::string text = read_file(hom_path);
  const auto fails = verify_certificate_text(text);
  if (!fails.empty()) {
    for (const auto& f : fails) std::fprintf(stderr, "homoclinic certificate: %s\n", f.c_str());
    throw VerificationFailed("homoclinic certificate does not re-verify");
  }
  const HomoclinicCertificate hom = homoclinic_from_json(text);

  fs::create_directories(out);
  SepArtifacts art;
  SeparatrixCertificate cert = compute_separatrix(hom, cfg.sep_settings(), &art);
  write_tube_csv(art.flight, out + "/gamma_tube.csv");
  export_eta_tube(art.flight, hom.a_bracket, out + "/eta_tube.csv");
  cert.gamma_tube_ref = "gamma_tube.csv";
  cert.eta_tube_ref = "eta_tube.csv";
  write_file_atomic(out + "/separatrix.json", separatrix_to_json(cert));
  std::printf("separatrix certificate issued: A in [%.17g, %.17g]\n", cert.ratio_A.lo(),
              cert.ratio_A.hi());
  std::printf("wrote %s/separatrix.json\n", out.c_str());
  return kOk;
}

int run_verify(const std::string& path) {
  const auto fails = verify_certificate_text(read_file(path));
  if (fails.empty()) {
    std::printf("certificate verifies: %s\n", path.c_str());
    return kOk;
  }
  for (const auto& f : fails) std::fprintf(stderr, "verification failure: %s\n", f.c_str());
  return kVerifyFailed;
}

int run_export_tube(const std::string& cert_path, const std::string& csv_path) {
  const std::string text = read_file(cert_path);
  // pick the first tube reference recorded in the certificate
  std::string tube;
  try {
    auto j = nlohmann::json::parse(text);
    if (j.contains("tube_refs") && j["tube_refs"].is_array() && !j["tube_refs"].empty())
      tube = j["tube_refs"][0].get<std::string>();
    else if (j.contains("gamma_tube_ref"))
      tube = j["gamma_tube_ref"].get<std::string>();
  } catch (const std::exception& e) {
    throw VerificationFailed(std::string("cannot read certificate: ") + e.what());
  }
  if (tube.empty()) throw VerificationFailed("certificate carries no tube reference");
  const fs::path src = fs::path(cert_path).parent_path() / tube;
  if (!fs::exists(src)) throw VerificationFailed("referenced tube file missing: " + src.string());
  fs::create_directories(fs::path(csv_path).parent_path().empty()
                             ? fs::path(".")
                             : fs::path(csv_path).parent_path());
  fs::copy_file(src, csv_path, fs::copy_options::overwrite_existing);
  std::printf("exported %s -> %s\n", src.c_str(), csv_path.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigorous homoclinic-butterfly and separatrix-value proofs for the "
               "rescaled Shimizu-Morioka system"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", hom_path, cert_path, csv_path;

  auto* c_hom = app.add_subcommand("prove-homoclinic", "certify the homoclinic bracket");
  c_hom->add_option("--config", config_path, "config file")->required();
  c_hom->add_option("--out", out_dir, "output directory")->required();

  auto* c_sep = app.add_subcommand("prove-separatrix", "certify the separatrix value");
  c_sep->add_option("--config", config_path, "config file")->required();
  c_sep->add_option("--homoclinic", hom_path, "homoclinic certificate JSON")->required();
  c_sep->add_option("--out", out_dir, "output directory")->required();

  auto* c_full = app.add_subcommand("full", "run both proof stages");
  c_full->add_option("--config", config_path, "config file")->required();
  c_full->add_option("--out", out_dir, "output directory")->required();

  auto* c_ver = app.add_subcommand("verify", "re-check a certificate from its JSON alone");
  c_ver->add_option("cert", cert_path, "certificate JSON")->required();

  auto* c_exp = app.add_subcommand("export-tube", "copy the tube CSV referenced by a certificate");
  c_exp->add_option("cert", cert_path, "certificate JSON")->required();
  c_exp->add_option("--csv", csv_path, "destination CSV path")->required();

  auto* c_cfg = app.add_subcommand("print-config", "print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (c_cfg->parsed()) {
      std::fputs(default_config_text().c_str(), stdout);
      return kOk;
    }
    if (c_ver->parsed()) return run_verify(cert_path);
    if (c_exp->parsed()) return run_export_tube(cert_path, csv_path);

    const ProofConfig cfg = parse_config_file(config_path);
    apply_threads(cfg);
    if (c_hom->parsed()) {
      try {
        return run_homoclinic(cfg, out_dir);
      } catch (const std::exception& e) {
        return classify(e, out_dir, "homoclinic");
      }
    }
    if (c_sep->parsed()) {
      try {
        return run_separatrix(cfg, hom_path, out_dir);
      } catch (const std::exception& e) {
        return classify(e, out_dir, "separatrix");
      }
    }
    if (c_full->parsed()) {
      try {
        int rc = run_homoclinic(cfg, out_dir);
        if (rc != kOk) return rc;
      } catch (const std::exception& e) {
        return classify(e, out_dir, "homoclinic");
      }
      try {
        return run_separatrix(cfg, out_dir + "/homoclinic.json", out_dir);
      } catch (const std::exception& e) {
        return classify(e, out_dir, "separatrix");
      }
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
