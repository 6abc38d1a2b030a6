// ghf command-line front end: basis | solve-fl | evolve | eigen | converge
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "config.hpp"
#include "runners.hpp"

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

int fail(const std::string& kind, const std::string& msg, int code, const std::string& key = "", int line = 0) {
    std::cerr << "error kind=" << kind;
    if (!key.empty()) std::cerr << " key=" << key;
    if (line > 0) std::cerr << " line=" << line;
    std::cerr << " message=" << quoted(msg) << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalised Hermite spectral methods"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".";
    int threads = 1;
    const std::pair<const char*, const char*> commands[] = {
        {"basis", "evaluate basis members, Gram and Fourier residuals"},
        {"solve-fl", "solve (-Laplacian)^s u + gamma u = f"},
        {"evolve", "Crank-Nicolson run of the fractional Schroedinger equation"},
        {"eigen", "eigenvalues of -Laplacian/2 + Z|x|^(2 alpha)"},
        {"converge", "error sweeps over K, dt or N"},
    };
    for (auto [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "parameter file (JSON object)")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail("usage", e.what(), 2);
    }
    std::string cmd = app.get_subcommands().front()->get_name();
    try {
        auto cfg = ghf::cli::Config::load(config_path);
        ghf::cli::RunContext ctx;
        ctx.out_dir = out_dir;
        ctx.threads = threads;
        ghf::cli::dispatch(cmd, cfg, ctx);
        for (auto& f : ctx.written) std::cout << f << "\n";
    } catch (const ghf::cli::config_error& e) {
        return fail("config", e.what(), 3, e.key, e.line);
    } catch (const ghf::domain_error& e) {
        return fail("domain", e.what(), 4);
    } catch (const ghf::convergence_error& e) {
        return fail("convergence", e.what(), 5);
    } catch (const ghf::linalg_error& e) {
        return fail("linalg", e.what(), 5);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
    return 0;
}
