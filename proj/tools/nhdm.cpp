// nhdm: parameter sweeps and acceptance verification for the
// non-Hermitian density matrix toolkit.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 numerical error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nhdm/sweep.hpp"
#include "nhdm/verify.hpp"

namespace {

struct RangeSpec {
    double start = 0.0, stop = 1.0;
    int count = 2;
};

bool parse_range(const std::string& text, RangeSpec& out) {
    const auto a = text.find(':');
    const auto b = text.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos) return false;
    try {
        out.start = std::stod(text.substr(0, a));
        out.stop = std::stod(text.substr(a + 1, b - a - 1));
        out.count = std::stoi(text.substr(b + 1));
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

int emit(const nhdm::SweepResult& result, const std::string& path) {
    const std::string csv = nhdm::to_csv(result);
    if (path.empty()) {
        std::cout << csv;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "nhdm: cannot open '" << path << "' for writing\n";
        return 2;
    }
    out << csv;
    return out.good() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Density matrices and entropy operators for non-Hermitian "
                 "quantum models"};
    app.require_subcommand(1);

    double alpha1 = 1.0, beta = 1.0, tol_override = 0.0;
    std::string range_text, out_path, only;
    bool allow_ep = false;

    const auto add_common = [&](CLI::App* cmd, const char* range_help) {
        cmd->add_option("--alpha1", alpha1, "Fixed alpha1 parameter");
        cmd->add_option("--range", range_text, range_help)->required();
        cmd->add_option("--beta", beta, "Inverse temperature");
        cmd->add_option("--out", out_path, "CSV output path (default stdout)");
        cmd->add_flag("--allow-ep", allow_ep,
                      "Evaluate exceptional points via the generalized pathway");
        cmd->add_option("--tol", tol_override, "Equality tolerance override");
    };

    auto* rdm1 = app.add_subcommand(
        "swanson-rdm1", "Sweep alpha2: eigenvalue-weighted Swanson state");
    add_common(rdm1, "alpha2 sweep START:STOP:COUNT");
    auto* thermal = app.add_subcommand(
        "swanson-thermal", "Sweep alpha2: Gibbs-weighted Swanson state");
    add_common(thermal, "alpha2 sweep START:STOP:COUNT");
    auto* two_state = app.add_subcommand(
        "two-state", "Sweep theta: deformed two-state model");
    add_common(two_state, "theta sweep START:STOP:COUNT");
    auto* gdm = app.add_subcommand(
        "gdm", "Sweep lambda1: generalized state at the exceptional point");
    add_common(gdm, "lambda1 sweep START:STOP:COUNT");

    auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_option("--tol", tol_override, "Equality tolerance override");
    verify->add_option("--only", only, "Run only criteria matching substring");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    nhdm::Tolerances tol;
    if (const char* env = std::getenv("NHDM_TOL")) {
        try {
            tol.eq_tol = std::stod(env);
        } catch (const std::exception&) {
            std::cerr << "nhdm: bad NHDM_TOL value '" << env << "'\n";
            return 2;
        }
    }
    if (tol_override > 0.0) tol.eq_tol = tol_override;

    try {
        tol.validate();
        if (verify->parsed()) {
            const auto results = nhdm::run_acceptance(tol, only);
            if (results.empty()) {
                std::cerr << "nhdm: no criterion matches '" << only << "'\n";
                return 2;
            }
            bool all_pass = true;
            for (const auto& r : results) {
                std::printf("%s %-22s %s\n", r.pass ? "PASS" : "FAIL",
                            r.name.c_str(), r.detail.c_str());
                all_pass = all_pass && r.pass;
            }
            return all_pass ? 0 : 1;
        }

        nhdm::SweepConfig cfg;
        cfg.alpha1 = alpha1;
        cfg.beta = beta;
        cfg.allow_ep = allow_ep;
        cfg.tol = tol;
        RangeSpec range;
        if (!parse_range(range_text, range)) {
            std::cerr << "nhdm: bad --range, expected START:STOP:COUNT\n";
            return 2;
        }
        cfg.start = range.start;
        cfg.stop = range.stop;
        cfg.count = range.count;
        if (rdm1->parsed()) cfg.command = nhdm::SweepCommand::SwansonRdm1;
        else if (thermal->parsed()) cfg.command = nhdm::SweepCommand::SwansonThermal;
        else if (two_state->parsed()) cfg.command = nhdm::SweepCommand::TwoState;
        else cfg.command = nhdm::SweepCommand::Gdm;

        return emit(nhdm::run_sweep(cfg), out_path);
    } catch (const nhdm::DomainError& e) {
        std::cerr << "nhdm: " << e.what() << '\n';
        return 2;
    } catch (const nhdm::Error& e) {
        std::cerr << "nhdm: " << e.what() << '\n';
        return 3;
    }
}
