// Command-line front end: runs the three canonical interference experiments
// (or a custom config file), writes per-detector CSV profiles and key=value
// fit reports, and prints a one-run summary.
//
// Exit codes: 0 success, 1 usage/config error, 2 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evsim/harness.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
    std::optional<std::uint64_t> seed, events, detectors;
    std::optional<double> gamma;
    std::optional<unsigned> replicas;
    std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--seed", f.seed, "RNG seed (64-bit)");
    cmd->add_option("--events", f.events, "total emission events");
    cmd->add_option("--detectors", f.detectors, "number of detectors on the screen");
    cmd->add_option("--gamma", f.gamma, "detector memory parameter, in (0,1)")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
    cmd->add_option("--replicas", f.replicas, "independent replicas merged after the run");
    cmd->add_option("--out", f.out, "output CSV path (fit report goes next to it)");
}

void apply_common(evsim::ExperimentConfig& cfg, const CommonFlags& f) {
    if (f.seed) cfg.seed = *f.seed;
    if (f.events) cfg.total_events = *f.events;
    if (f.detectors) cfg.screen.detectors = *f.detectors;
    if (f.gamma) cfg.gamma = *f.gamma;
    if (f.replicas) cfg.replicas = *f.replicas;
}

fs::path default_out_dir() {
    if (const char* env = std::getenv("EVSIM_OUT_DIR")) return env;
    return ".";
}

fs::path resolve_out(const CommonFlags& f, const std::string& stem) {
    if (!f.out.empty()) return f.out;
    return default_out_dir() / (stem + ".csv");
}

fs::path report_path(const fs::path& csv) {
    fs::path p = csv;
    p.replace_extension(".fit");
    return p;
}

int execute(const evsim::ExperimentConfig& cfg, const fs::path& csv_path) {
    const evsim::RunResult res = evsim::run(cfg);
    const evsim::TheoryProfile theory{res.profile.coordinates, res.profile.theory};
    const evsim::FitReport fit = evsim::fit_and_compare(res.profile, theory);

    evsim::write_csv(csv_path.string(), res.profile);
    evsim::write_fit_report(report_path(csv_path).string(), cfg, res, fit);

    std::uint64_t received = 0;
    for (auto m : res.profile.received) received += m;
    std::cout << "experiment      " << cfg.name << '\n'
              << "config digest   " << evsim::config_digest(cfg) << '\n'
              << "seed            " << cfg.seed << '\n'
              << "events          " << cfg.total_events << "  (received " << received
              << ", off-screen " << res.off_screen << ", absorbed " << res.absorbed << ")\n"
              << "scale           " << fit.scale << '\n'
              << "nrmse           " << fit.normalized_rmse << '\n'
              << "period sim      " << fit.fringe_period_sim << '\n'
              << "period theory   " << fit.fringe_period_theory << '\n'
              << "wall seconds    " << res.wall_seconds << '\n'
              << "csv             " << csv_path.string() << '\n';
    return 0;
}

std::vector<double> parse_offsets(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(evsim::parse_quantity(item));
    if (out.empty()) throw CLI::ValidationError("--screen-offset", "empty offset list");
    return out;
}

std::string offset_tag(double meters) {
    std::ostringstream o;
    o << meters * 1e3 << "mm";
    std::string s = o.str();
    for (auto& c : s)
        if (c == '.') c = 'p';
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-based single-photon interference simulator"};
    app.require_subcommand(1);

    CommonFlags fd, ft, fb, fc;
    std::string offsets = "7mm";
    std::string config_file;

    CLI::App* ds = app.add_subcommand("double-slit", "Fraunhofer double slit, semicircular screen");
    add_common(ds, fd);
    CLI::App* tb = app.add_subcommand("two-beam", "two Gaussian line sources, planar screen");
    add_common(tb, ft);
    CLI::App* bp = app.add_subcommand("biprism", "Fresnel biprism with internal source");
    add_common(bp, fb);
    bp->add_option("--screen-offset", offsets,
                   "comma-separated screen distances beyond the apex, e.g. 7mm,15mm,55mm");
    CLI::App* cu = app.add_subcommand("custom", "run a config file");
    add_common(cu, fc);
    cu->add_option("--config", config_file, "key=value config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints help or the error message
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (ds->parsed()) {
            evsim::ExperimentConfig cfg = evsim::double_slit_config();
            apply_common(cfg, fd);
            return execute(cfg, resolve_out(fd, "double-slit"));
        }
        if (tb->parsed()) {
            evsim::ExperimentConfig cfg = evsim::two_beam_config();
            apply_common(cfg, ft);
            return execute(cfg, resolve_out(ft, "two-beam"));
        }
        if (bp->parsed()) {
            std::vector<double> offs;
            try {
                offs = parse_offsets(offsets);
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << '\n';
                return 1;
            }
            const bool multi = offs.size() > 1;
            for (double off : offs) {
                evsim::ExperimentConfig cfg = evsim::biprism_config(off);
                apply_common(cfg, fb);
                fs::path out = resolve_out(fb, "biprism_" + offset_tag(off));
                if (multi && !fb.out.empty()) {
                    // A single --out with several offsets: suffix each file.
                    out = fb.out;
                    out.replace_filename(out.stem().string() + "_" + offset_tag(off) +
                                         out.extension().string());
                }
                const int rc = execute(cfg, out);
                if (rc != 0) return rc;
                if (off != offs.back()) std::cout << '\n';
            }
            return 0;
        }
        // custom
        evsim::ExperimentConfig cfg;
        try {
            cfg = evsim::load_config_file(config_file);
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
        apply_common(cfg, fc);
        return execute(cfg, resolve_out(fc, "custom"));
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << '\n';
        return 2;
    }
}
