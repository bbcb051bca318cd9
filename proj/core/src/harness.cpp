#include "evsim/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "evsim/detector.hpp"

namespace evsim {

namespace {

constexpr double kLambda = 670e-9;  // shared wavelength of all three experiments
constexpr double kPi = 3.141592653589793238462643383279;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double twin_envelope_sigma(double sigma, double X, double lambda) {
    const double k = 2.0 * kPi / lambda;
    const double ks2 = k * sigma * sigma;
    const double b = ks2 * ks2 / (X * X + ks2 * ks2);
    return sigma / std::sqrt(b);
}

void finalize_two_beam(ExperimentConfig& cfg, bool extent_set, bool aperture_set) {
    auto& src = std::get<GaussianTwinSource>(cfg.source.variant);
    if (!extent_set) {
        const double env = twin_envelope_sigma(src.sigma, cfg.screen.x, cfg.source.wavelength);
        cfg.screen.extent_hi = 4.0 * env;
        cfg.screen.extent_lo = -4.0 * env;
    }
    if (!aperture_set) src.aperture = std::atan(cfg.screen.extent_hi / cfg.screen.x);
}

void finalize_biprism(ExperimentConfig& cfg, bool extent_set) {
    const auto& src = std::get<BiprismSource>(cfg.source.variant);
    if (!extent_set) {
        const BiprismSpec& bp = src.biprism;
        const double spread = (cfg.screen.x - bp.apex_x) *
                              std::tan(0.5 * bp.summit_angle + bp.thin_prism_deflection());
        cfg.screen.extent_hi = 2.0 * src.sigma + spread;
        cfg.screen.extent_lo = -cfg.screen.extent_hi;
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    source.validate();
    if (screen.detectors < 2) throw std::invalid_argument("config: need at least two detectors");
    if (!(screen.extent_hi > screen.extent_lo)) throw std::invalid_argument("config: empty screen");
    if (!(screen.x > 0.0)) throw std::invalid_argument("config: screen distance must be positive");
    if (!(gamma > 0.0) || !(gamma < 1.0)) throw std::invalid_argument("config: gamma outside (0,1)");
    if (total_events < screen.detectors)
        throw std::invalid_argument("config: event budget below detector count");
    if (replicas < 1) throw std::invalid_argument("config: need at least one replica");
}

ExperimentConfig double_slit_config() {
    ExperimentConfig cfg;
    cfg.name = "double-slit";
    cfg.source.wavelength = kLambda;
    cfg.source.variant = DoubleSlitSource{kLambda, 5.0 * kLambda, 0.5 * kPi};
    cfg.screen = {ScreenKind::Semicircle, 0.05e-3, -0.5 * kPi, 0.5 * kPi, 181};
    cfg.total_events = 2'000'000;
    return cfg;
}

ExperimentConfig two_beam_config() {
    ExperimentConfig cfg;
    cfg.name = "two-beam";
    cfg.source.wavelength = kLambda;
    cfg.source.variant = GaussianTwinSource{kLambda, 8.0 * kLambda, 0.0};
    cfg.screen = {ScreenKind::Plane, 0.1e-3, 0.0, 0.0, 181};
    cfg.total_events = 2'000'000;
    finalize_two_beam(cfg, false, false);
    return cfg;
}

ExperimentConfig biprism_config(double screen_offset) {
    ExperimentConfig cfg;
    cfg.name = "biprism";
    cfg.source.wavelength = kLambda;
    BiprismSpec bp{1.0 * kPi / 180.0, 1.5631, 45e-3};
    cfg.source.variant = BiprismSource{0.531e-3, 0.0, bp};
    cfg.screen = {ScreenKind::Plane, bp.apex_x + screen_offset, 0.0, 0.0, 1000};
    cfg.total_events = 10'000'000;
    finalize_biprism(cfg, false);
    return cfg;
}

TheoryProfile theory_for(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<double> coords(cfg.screen.detectors);
    const double w = (cfg.screen.extent_hi - cfg.screen.extent_lo) /
                     static_cast<double>(cfg.screen.detectors);
    for (std::size_t j = 0; j < coords.size(); ++j)
        coords[j] = cfg.screen.extent_lo + (static_cast<double>(j) + 0.5) * w;

    const double lambda = cfg.source.wavelength;
    if (const auto* ds = std::get_if<DoubleSlitSource>(&cfg.source.variant)) {
        return sample_profile(
            [&](double th) {
                return double_slit_intensity(th, ds->slit_width, ds->separation, lambda);
            },
            coords);
    }
    if (const auto* gt = std::get_if<GaussianTwinSource>(&cfg.source.variant)) {
        return sample_profile(
            [&](double y) {
                return gaussian_twin_intensity(y, gt->separation, gt->sigma, cfg.screen.x, lambda);
            },
            coords);
    }
    const auto& bp = std::get<BiprismSource>(cfg.source.variant);
    const BiprismOracle oracle(bp.biprism, bp.sigma, bp.source_x, cfg.screen.x, lambda);
    return sample_profile(
        [&](double y) {
            return oracle.expected_counts(y, static_cast<double>(cfg.total_events), w, cfg.gamma);
        },
        coords);
}

namespace {

struct ReplicaResult {
    std::vector<std::uint64_t> received, fired;
    std::uint64_t off_screen = 0, absorbed = 0;
};

void run_replica(const ExperimentConfig& cfg, unsigned replica, std::uint64_t events,
                 ReplicaResult& out) {
    DetectorArray array(cfg.screen.extent_lo, cfg.screen.extent_hi, cfg.screen.detectors,
                        cfg.gamma);
    Rng emit(cfg.seed, emission_stream(replica));
    std::vector<Rng> thresholds;
    thresholds.reserve(array.size());
    for (std::size_t j = 0; j < array.size(); ++j)
        thresholds.emplace_back(cfg.seed, detector_stream(replica, j));

    for (std::uint64_t i = 0; i < events; ++i) {
        const MessageResult m = next_message(cfg.source, cfg.screen.x, emit);
        if (m.absorbed) {
            ++out.absorbed;
            continue;
        }
        const std::size_t j = array.locate(m.message.arrival);
        if (j == DetectorArray::npos) {
            ++out.off_screen;
            continue;
        }
        array[j].update(m.message.e);
        array[j].fire(thresholds[j].uniform());
    }

    out.received.resize(array.size());
    out.fired.resize(array.size());
    for (std::size_t j = 0; j < array.size(); ++j) {
        out.received[j] = array[j].received;
        out.fired[j] = array[j].fired;
    }
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    // Event budget split across replicas; the first (total mod replicas)
    // replicas take one extra event.
    std::vector<ReplicaResult> parts(cfg.replicas);
    const std::uint64_t base = cfg.total_events / cfg.replicas;
    const std::uint64_t extra = cfg.total_events % cfg.replicas;
    if (cfg.replicas == 1) {
        run_replica(cfg, 0, cfg.total_events, parts[0]);
    } else {
        std::vector<std::thread> workers;
        for (unsigned r = 0; r < cfg.replicas; ++r)
            workers.emplace_back(run_replica, std::cref(cfg), r, base + (r < extra ? 1 : 0),
                                 std::ref(parts[r]));
        for (auto& w : workers) w.join();
    }

    RunResult res;
    res.profile.coordinates.resize(cfg.screen.detectors);
    const double w = (cfg.screen.extent_hi - cfg.screen.extent_lo) /
                     static_cast<double>(cfg.screen.detectors);
    for (std::size_t j = 0; j < cfg.screen.detectors; ++j)
        res.profile.coordinates[j] = cfg.screen.extent_lo + (static_cast<double>(j) + 0.5) * w;
    res.profile.received.assign(cfg.screen.detectors, 0);
    res.profile.fired.assign(cfg.screen.detectors, 0);
    for (const auto& p : parts) {
        res.off_screen += p.off_screen;
        res.absorbed += p.absorbed;
        for (std::size_t j = 0; j < cfg.screen.detectors; ++j) {
            res.profile.received[j] += p.received[j];
            res.profile.fired[j] += p.fired[j];
        }
    }

    const TheoryProfile th = theory_for(cfg);
    res.profile.theory = th.intensities;
    std::vector<double> fired_d(res.profile.fired.begin(), res.profile.fired.end());
    const ScaleFit fit = fit_scale(fired_d, res.profile.theory);
    res.profile.theory_fitted.resize(th.intensities.size());
    for (std::size_t j = 0; j < th.intensities.size(); ++j)
        res.profile.theory_fitted[j] = fit.scale * th.intensities[j];

    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

FitReport fit_and_compare(const CountsProfile& profile, const TheoryProfile& theory) {
    if (profile.coordinates != theory.coordinates)
        throw std::invalid_argument("fit_and_compare: coordinate mismatch");
    std::vector<double> fired_d(profile.fired.begin(), profile.fired.end());
    const ScaleFit fit = fit_scale(fired_d, theory.intensities);

    FitReport rep;
    rep.scale = fit.scale;
    rep.normalized_rmse = fit.nrmse;
    rep.fringe_period_sim = std::numeric_limits<double>::quiet_NaN();
    rep.fringe_period_theory = std::numeric_limits<double>::quiet_NaN();

    // The theory curve is noise-free; its own central-minima spacing sets the
    // smoothing scale used on the (noisy) simulated curve.
    const auto pt = fringe_period_central_minima(theory.coordinates, theory.intensities, 0);
    if (pt) {
        rep.fringe_period_theory = *pt;
        const double bin = profile.coordinates[1] - profile.coordinates[0];
        const int sw = std::max(1, static_cast<int>(std::lround(*pt / (8.0 * bin))));
        const auto ps = fringe_period_central_minima(profile.coordinates, fired_d, sw);
        if (ps) rep.fringe_period_sim = *ps;
    }
    return rep;
}

CountsProfile replica_merge(const std::vector<CountsProfile>& parts) {
    if (parts.empty()) return {};
    CountsProfile out = parts.front();
    for (std::size_t p = 1; p < parts.size(); ++p) {
        if (parts[p].coordinates != out.coordinates)
            throw std::invalid_argument("replica_merge: geometry mismatch");
        for (std::size_t j = 0; j < out.fired.size(); ++j) {
            out.received[j] += parts[p].received[j];
            out.fired[j] += parts[p].fired[j];
        }
    }
    return out;
}

void write_csv(const std::string& path, const CountsProfile& profile) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open output file: " + tmp);
        f << "index,coordinate,received,fired,theory,theory_fitted\n";
        for (std::size_t j = 0; j < profile.coordinates.size(); ++j) {
            f << j << ',' << fmt17(profile.coordinates[j]) << ',' << profile.received[j] << ','
              << profile.fired[j] << ','
              << fmt17(j < profile.theory.size() ? profile.theory[j] : 0.0) << ','
              << fmt17(j < profile.theory_fitted.size() ? profile.theory_fitted[j] : 0.0)
              << '\n';
        }
        if (!f.good()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move output into place: " + path);
    }
}

void write_fit_report(const std::string& path, const ExperimentConfig& cfg,
                      const RunResult& result, const FitReport& fit) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open output file: " + tmp);
        f << "experiment=" << cfg.name << '\n'
          << "config_digest=" << config_digest(cfg) << '\n'
          << "seed=" << cfg.seed << '\n'
          << "events=" << cfg.total_events << '\n'
          << "replicas=" << cfg.replicas << '\n'
          << "gamma=" << fmt17(cfg.gamma) << '\n'
          << "detectors=" << cfg.screen.detectors << '\n'
          << "off_screen=" << result.off_screen << '\n'
          << "absorbed=" << result.absorbed << '\n'
          << "scale=" << fmt17(fit.scale) << '\n'
          << "normalized_rmse=" << fmt17(fit.normalized_rmse) << '\n'
          << "fringe_period_sim=" << fmt17(fit.fringe_period_sim) << '\n'
          << "fringe_period_theory=" << fmt17(fit.fringe_period_theory) << '\n'
          << "wall_seconds=" << fmt17(result.wall_seconds) << '\n';
        if (!f.good()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move output into place: " + path);
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::uint64_t parse_count(const std::string& raw) {
    const std::string s = trim(raw);
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: unparsable integer '" + s + "'");
    }
}

}  // namespace

// Parse a value with an optional length/angle unit into canonical units
// (meters / radians).
double parse_quantity(const std::string& raw) {
    const std::string s = trim(raw);
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: unparsable number '" + s + "'");
    }
    const std::string unit = trim(s.substr(pos));
    if (unit.empty()) return v;
    if (unit == "m") return v;
    if (unit == "mm") return v * 1e-3;
    if (unit == "um") return v * 1e-6;
    if (unit == "nm") return v * 1e-9;
    if (unit == "rad") return v;
    if (unit == "deg") return v * kPi / 180.0;
    throw std::invalid_argument("config: unknown unit '" + unit + "'");
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream o;
    o << "experiment = " << cfg.name << '\n';
    o << "wavelength = " << fmt17(cfg.source.wavelength) << " m\n";
    o << "gamma = " << fmt17(cfg.gamma) << '\n';
    o << "events = " << cfg.total_events << '\n';
    o << "seed = " << cfg.seed << '\n';
    o << "replicas = " << cfg.replicas << '\n';
    o << "detectors = " << cfg.screen.detectors << '\n';
    if (const auto* ds = std::get_if<DoubleSlitSource>(&cfg.source.variant)) {
        o << "slit_width = " << fmt17(ds->slit_width) << " m\n";
        o << "slit_separation = " << fmt17(ds->separation) << " m\n";
        o << "screen_radius = " << fmt17(cfg.screen.x) << " m\n";
        o << "aperture = " << fmt17(ds->aperture) << " rad\n";
        o << "extent = " << fmt17(cfg.screen.extent_hi) << " rad\n";
    } else if (const auto* gt = std::get_if<GaussianTwinSource>(&cfg.source.variant)) {
        o << "sigma = " << fmt17(gt->sigma) << " m\n";
        o << "separation = " << fmt17(gt->separation) << " m\n";
        o << "screen_distance = " << fmt17(cfg.screen.x) << " m\n";
        o << "aperture = " << fmt17(gt->aperture) << " rad\n";
        o << "extent = " << fmt17(cfg.screen.extent_hi) << " m\n";
    } else {
        const auto& bp = std::get<BiprismSource>(cfg.source.variant);
        o << "sigma = " << fmt17(bp.sigma) << " m\n";
        o << "refractive_index = " << fmt17(bp.biprism.refractive_index) << '\n';
        o << "summit_angle = " << fmt17(bp.biprism.summit_angle) << " rad\n";
        o << "apex_x = " << fmt17(bp.biprism.apex_x) << " m\n";
        o << "source_x = " << fmt17(bp.source_x) << " m\n";
        o << "screen_offset = " << fmt17(cfg.screen.x - bp.biprism.apex_x) << " m\n";
        o << "extent = " << fmt17(cfg.screen.extent_hi) << " m\n";
    }
    return o.str();
}

ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value, got '" + line + "'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    const auto it = kv.find("experiment");
    if (it == kv.end()) throw std::invalid_argument("config: missing 'experiment' key");
    const std::string kind = it->second;
    kv.erase(it);

    ExperimentConfig cfg;
    if (kind == "double-slit") cfg = double_slit_config();
    else if (kind == "two-beam") cfg = two_beam_config();
    else if (kind == "biprism") cfg = biprism_config(7e-3);
    else throw std::invalid_argument("config: unknown experiment '" + kind + "'");

    bool extent_set = false, aperture_set = false;
    for (const auto& [key, val] : kv) {
        if (key == "wavelength") cfg.source.wavelength = parse_quantity(val);
        else if (key == "gamma") cfg.gamma = parse_quantity(val);
        else if (key == "events") cfg.total_events = parse_count(val);
        else if (key == "seed") cfg.seed = parse_count(val);
        else if (key == "replicas") cfg.replicas = static_cast<unsigned>(parse_count(val));
        else if (key == "detectors") cfg.screen.detectors = parse_count(val);
        else if (key == "extent") {
            cfg.screen.extent_hi = parse_quantity(val);
            cfg.screen.extent_lo = -cfg.screen.extent_hi;
            extent_set = true;
        } else if (auto* ds = std::get_if<DoubleSlitSource>(&cfg.source.variant)) {
            if (key == "slit_width") ds->slit_width = parse_quantity(val);
            else if (key == "slit_separation") ds->separation = parse_quantity(val);
            else if (key == "screen_radius") cfg.screen.x = parse_quantity(val);
            else if (key == "aperture") { ds->aperture = parse_quantity(val); aperture_set = true; }
            else throw std::invalid_argument("config: unknown key '" + key + "'");
        } else if (auto* gt = std::get_if<GaussianTwinSource>(&cfg.source.variant)) {
            if (key == "sigma") gt->sigma = parse_quantity(val);
            else if (key == "separation") gt->separation = parse_quantity(val);
            else if (key == "screen_distance") cfg.screen.x = parse_quantity(val);
            else if (key == "aperture") { gt->aperture = parse_quantity(val); aperture_set = true; }
            else throw std::invalid_argument("config: unknown key '" + key + "'");
        } else {
            auto& bp = std::get<BiprismSource>(cfg.source.variant);
            if (key == "sigma") bp.sigma = parse_quantity(val);
            else if (key == "refractive_index") bp.biprism.refractive_index = parse_quantity(val);
            else if (key == "summit_angle") bp.biprism.summit_angle = parse_quantity(val);
            else if (key == "apex_x") bp.biprism.apex_x = parse_quantity(val);
            else if (key == "source_x") bp.source_x = parse_quantity(val);
            else if (key == "screen_offset")
                cfg.screen.x = bp.biprism.apex_x + parse_quantity(val);
            else throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    // screen_offset may arrive before apex_x in map order; re-resolve it.
    if (std::holds_alternative<BiprismSource>(cfg.source.variant)) {
        const auto& bp = std::get<BiprismSource>(cfg.source.variant);
        if (kv.count("screen_offset"))
            cfg.screen.x = bp.biprism.apex_x + parse_quantity(kv.at("screen_offset"));
        finalize_biprism(cfg, extent_set);
    } else if (std::holds_alternative<GaussianTwinSource>(cfg.source.variant)) {
        finalize_two_beam(cfg, extent_set, aperture_set);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("config: cannot open file " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

std::string config_digest(const ExperimentConfig& cfg) {
    const std::string text = serialize_config(cfg);
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace evsim
