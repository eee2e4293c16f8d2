// paramguide command-line driver: spectra, correlations, quantized-pump
// trajectories, Fock-space pair states, self-verification and length sweeps.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "paramguide/config.hpp"
#include "paramguide/correlations.hpp"
#include "paramguide/errors.hpp"
#include "paramguide/fock_ivp.hpp"
#include "paramguide/kernels.hpp"
#include "paramguide/parallel.hpp"
#include "paramguide/quantized_pump.hpp"
#include "paramguide/spectral_solver.hpp"
#include "paramguide/verify.hpp"

#ifndef PARAMGUIDE_VERSION
#define PARAMGUIDE_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace paramguide;
using nlohmann::json;

namespace {

struct UsageError : Error { using Error::Error; };

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw ConfigError("cannot open output '" + path + "'");
    }
    void header(const std::vector<std::string>& cols) { row_strings(cols); }
    void row(const std::vector<double>& v) {
        std::vector<std::string> s;
        s.reserve(v.size());
        for (double x : v) s.push_back(num(x));
        row_strings(s);
    }

private:
    void row_strings(const std::vector<std::string>& s) {
        for (size_t i = 0; i < s.size(); ++i) out_ << (i ? "," : "") << s[i];
        out_ << "\n";
    }
    std::ofstream out_;
};

struct RunContext {
    std::string subcommand;
    std::string config_hash;
    std::vector<std::string> artifacts;
    fs::path out_dir = ".";
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

void ensure_parent(const std::string& path, RunContext& ctx) {
    fs::path p(path);
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
        ctx.out_dir = p.parent_path();
    }
}

void write_manifest(const RunContext& ctx, const CLI::App& sub) {
    json flags = json::object();
    for (const CLI::Option* o : sub.get_options()) {
        std::string name = o->get_name();
        if (name == "--help" || name.empty()) continue;
        std::string v;
        if (o->count() > 0) {
            auto r = o->results();
            for (size_t i = 0; i < r.size(); ++i) v += (i ? "," : "") + r[i];
        } else {
            v = o->get_default_str();
        }
        flags[name] = v;
    }
    json m;
    m["config_hash"] = ctx.config_hash;
    m["subcommand"] = ctx.subcommand;
    m["flags"] = flags;
    m["artifact_paths"] = ctx.artifacts;
    m["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
    m["version"] = PARAMGUIDE_VERSION;
    m["simd"] = kernels::isa_name(kernels::active_isa());
    m["threads"] = thread_count();
    std::ofstream f(ctx.out_dir / "manifest.json");
    f << m.dump(2) << "\n";
}

void write_spectrum_csv(const std::string& path, const FluxSpectrum& s) {
    CsvWriter w(path);
    w.header({"nu_thz", "signal_density", "noise_te_density", "noise_tm_density"});
    for (size_t i = 0; i < s.grid.detunings.size(); ++i)
        w.row({units::rad_to_thz(s.grid.detunings[i]), s.signal[i], s.noise_te[i], s.noise_tm[i]});
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            double v = std::stod(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("cannot parse number '" + item + "' in list");
        }
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biphoton generation in dispersive lossy waveguides"};
    app.set_version_flag("--version", PARAMGUIDE_VERSION);
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    std::string config;

    // spectrum
    auto* sp = app.add_subcommand("spectrum", "Signal and Langevin-noise spectral densities");
    double sp_len = -1, sp_lo = NAN, sp_hi = NAN;
    int sp_n = 2001;
    std::string sp_out = "spectrum.csv";
    sp->add_option("--config", config, "device JSON")->required();
    sp->add_option("--length-cm", sp_len, "device length (default: from config)");
    sp->add_option("--nu-min-thz", sp_lo, "lowest detuning nu/2pi");
    sp->add_option("--nu-max-thz", sp_hi, "highest detuning nu/2pi");
    sp->add_option("--samples", sp_n)->check(CLI::Range(2, 10000000));
    sp->add_option("--out", sp_out);

    // correlation
    auto* co = app.add_subcommand("correlation", "Normalized flux correlation Theta(L, tau)");
    double co_len = -1, co_center = 6.0, co_width = 0.3, co_tmin = -1.0, co_tmax = 1.0;
    int co_n = 201;
    std::string co_out = "correlation.csv", co_kernel = "low-gain";
    co->add_option("--config", config)->required();
    co->add_option("--length-cm", co_len);
    co->add_option("--center-thz", co_center);
    co->add_option("--width-thz", co_width);
    co->add_option("--tau-min-ps", co_tmin);
    co->add_option("--tau-max-ps", co_tmax);
    co->add_option("--samples", co_n)->check(CLI::Range(1, 10000000));
    co->add_option("--kernel", co_kernel)->check(CLI::IsMember({"general", "low-gain"}));
    co->add_option("--out", co_out);

    // qpump
    auto* qp = app.add_subcommand("qpump", "Single-photon pump propagation over spectral bands");
    int qp_bands = -1, qp_steps = 1000;
    double qp_bw = -1, qp_z = -1;
    std::string qp_mode = "n-band", qp_out = "qpump.csv";
    qp->add_option("--config", config)->required();
    qp->add_option("--bands", qp_bands, "band count (default: from config)");
    qp->add_option("--band-width-thz", qp_bw, "band width / 2pi (default: from config)");
    qp->add_option("--z-max-cm", qp_z, "propagation length (default: device length)");
    qp->add_option("--steps", qp_steps)->check(CLI::Range(1, 100000000));
    qp->add_option("--mode", qp_mode)->check(CLI::IsMember({"two-band", "n-band", "asymptotic"}));
    qp->add_option("--out", qp_out);

    // ivp
    auto* iv = app.add_subcommand("ivp", "Fock-space pair state from the vacuum");
    double iv_mabs = 0, iv_marg = 0, iv_t = 0;
    int iv_nmax = kDefaultNmax;
    std::string iv_out = "ivp.json";
    iv->add_option("--m-abs", iv_mabs, "|M|, erg")->required();
    iv->add_option("--m-arg", iv_marg, "Arg M, rad");
    iv->add_option("--t-int-s", iv_t, "interaction time, s")->required();
    iv->add_option("--nmax", iv_nmax)->check(CLI::Range(8, 100000));
    iv->add_option("--out", iv_out);

    // verify
    auto* ve = app.add_subcommand("verify", "Closed forms against independent oracles");
    std::string ve_out = "verify_report.json";
    ve->add_option("--out", ve_out);

    // sweep
    auto* sw = app.add_subcommand("sweep", "Spectra for several device lengths on one grid");
    std::string sw_lengths = "0.05,0.2,1.0", sw_dir = "sweep";
    int sw_n = 4001;
    sw->add_option("--config", config)->required();
    sw->add_option("--lengths", sw_lengths, "comma-separated lengths, cm");
    sw->add_option("--samples", sw_n)->check(CLI::Range(2, 10000000));
    sw->add_option("--out-dir", sw_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    RunContext ctx;
    CLI::App* active = app.get_subcommands().front();
    ctx.subcommand = active->get_name();
    try {
        std::optional<LoadedConfig> lc;
        if (!config.empty()) {
            lc = load_config(config);
            ctx.config_hash = lc->hash;
        }

        if (*sp) {
            DeviceConfig cfg = lc->device;
            double L = sp_len > 0 ? sp_len : cfg.length;
            if (sp_len == 0.0) throw UsageError("--length-cm must be positive");
            double w = 1.5 * total_spdc_bandwidth(cfg, L);
            double lo = std::isnan(sp_lo) ? -w : units::thz_to_rad(sp_lo);
            double hi = std::isnan(sp_hi) ? w : units::thz_to_rad(sp_hi);
            FluxSpectrum s = compute_spectrum(cfg, L, SpectralGrid::uniform(lo, hi, sp_n));
            ensure_parent(sp_out, ctx);
            write_spectrum_csv(sp_out, s);
            ctx.artifacts.push_back(sp_out);
        } else if (*co) {
            DeviceConfig cfg = lc->device;
            double L = co_len > 0 ? co_len : cfg.length;
            CorrelationWindows win{units::thz_to_rad(co_center), units::thz_to_rad(co_width)};
            std::vector<double> taus(co_n);
            for (int i = 0; i < co_n; ++i)
                taus[i] = 1e-12 * (co_n == 1 ? co_tmin : co_tmin + (co_tmax - co_tmin) * i / (co_n - 1));
            KernelPath path = co_kernel == "general" ? KernelPath::General : KernelPath::LowGain;
            auto res = theta_sweep(win, L, taus, cfg, path);
            if (!res.empty() && res.front().noise_band_warning)
                std::cerr << "warning: detection window approaches the Langevin noise band\n";
            ensure_parent(co_out, ctx);
            CsvWriter w(co_out);
            w.header({"tau_ps", "theta", "K", "D_te", "D_tm"});
            for (auto& r : res) w.row({r.tau * 1e12, r.theta, r.K, r.D_te, r.D_tm});
            ctx.artifacts.push_back(co_out);
        } else if (*qp) {
            DeviceConfig cfg = lc->device;
            int bands = qp_bands > 0 ? qp_bands : (lc->qpump ? lc->qpump->bands : 2);
            double bw = qp_bw > 0 ? units::thz_to_rad(qp_bw)
                                  : (lc->qpump ? lc->qpump->band_width : -1.0);
            if (!(bw > 0)) throw UsageError("band width needed: --band-width-thz or qpump.band_width_thz");
            double z_max = qp_z > 0 ? qp_z : cfg.length;
            BandGrid grid = BandGrid::symmetric(bands, bw);
            ensure_parent(qp_out, ctx);
            CsvWriter w(qp_out);
            auto header = [&](size_t n) {
                std::vector<std::string> h = {"z_cm", "abs_cp_sq", "sum_cw_sq"};
                for (size_t i = 0; i < n; ++i) h.push_back("cw_re_" + std::to_string(i));
                for (size_t i = 0; i < n; ++i) h.push_back("cw_im_" + std::to_string(i));
                w.header(h);
            };
            auto emit = [&](double z, cplx cp, const std::vector<cplx>& cw) {
                std::vector<double> row = {z, std::norm(cp), 0.0};
                for (auto& c : cw) row[2] += std::norm(c);
                for (auto& c : cw) row.push_back(c.real());
                for (auto& c : cw) row.push_back(c.imag());
                w.row(row);
            };
            if (qp_mode == "two-band") {
                if (bands != 2) throw UsageError("two-band mode needs --bands 2");
                double delta = band_detuning(grid.nu_values[1], cfg);
                header(2);
                for (int i = 0; i <= qp_steps; ++i) {
                    double z = z_max * i / qp_steps;
                    auto s = two_band_closed_form(delta, cfg.G(), grid.Q0, z);
                    emit(z, s.cp, {s.cw2, s.cw1});
                }
            } else if (qp_mode == "n-band") {
                Trajectory t = propagate_amplitudes(grid, cfg, z_max, qp_steps);
                header(grid.nu_values.size());
                for (auto& s : t.states) emit(s.z, s.cp, s.cw);
                if (t.max_norm_drift > 1e-10)
                    throw AccuracyError("norm drift " + num(t.max_norm_drift) + " exceeds 1e-10");
            } else {
                BroadbandRegime r = broadband_regime(cfg, grid.total_width);
                if (r.regime == PumpRegime::Intermediate)
                    throw RegimeError("alpha = " + num(r.alpha) +
                                      " lies between the Rabi and decay limits; use n-band");
                std::cerr << "alpha = " << num(r.alpha) << ", K_R = " << num(r.K_R)
                          << ", kappa (half) = " << num(r.kappa_half)
                          << ", kappa (full) = " << num(r.kappa_full) << "\n";
                header(0);
                for (int i = 0; i <= qp_steps; ++i) {
                    double z = z_max * i / qp_steps;
                    double p = r.regime == PumpRegime::Rabi ? std::pow(std::cos(r.K_R * z), 2)
                                                            : std::exp(-2.0 * r.kappa_half * z);
                    w.row({z, p, 1.0 - p});
                }
            }
            ctx.artifacts.push_back(qp_out);
        } else if (*iv) {
            if (iv_mabs < 0 || iv_t < 0) throw UsageError("--m-abs and --t-int-s must be >= 0");
            cplx zeta = std::polar(iv_mabs * iv_t / units::hbar, iv_marg);
            PairState s = evolve_pair(zeta, iv_nmax);
            json j;
            j["squeeze_arg"] = {zeta.real(), zeta.imag()};
            j["r"] = std::abs(zeta);
            j["convention"] = "psi = exp(i (zeta a^dag b^dag + conj(zeta) a b)) |0,0>, C_1 ~ i zeta";
            j["n_max"] = iv_nmax;
            json amps = json::array();
            for (int n = 0; n <= iv_nmax; ++n)
                amps.push_back({{"n", n}, {"re", s.amplitudes[n].real()}, {"im", s.amplitudes[n].imag()}});
            j["amplitudes"] = amps;
            j["leak"] = s.leak;
            ensure_parent(iv_out, ctx);
            std::ofstream f(iv_out);
            f << j.dump(2) << "\n";
            ctx.artifacts.push_back(iv_out);
        } else if (*ve) {
            VerifyReport rep = run_verify_suite();
            json cases = json::array();
            for (auto& c : rep.cases) {
                cases.push_back({{"case", c.family}, {"max_rel_err", c.max_rel_err},
                                 {"tolerance", c.tolerance}, {"pass", c.pass}, {"note", c.note}});
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.family << "  " << num(c.max_rel_err)
                          << "\n";
            }
            json d = {{"kappa_fit", rep.decay.kappa_fit},   {"kappa_half", rep.decay.kappa_half},
                      {"kappa_full", rep.decay.kappa_full}, {"alpha", rep.decay.alpha},
                      {"bands", rep.decay.bands},           {"winner", rep.decay.winner}};
            ensure_parent(ve_out, ctx);
            std::ofstream f(ve_out);
            f << json{{"cases", cases}, {"decay_exponent", d}, {"pass", rep.all_pass()}}.dump(2)
              << "\n";
            ctx.artifacts.push_back(ve_out);
            write_manifest(ctx, *active);
            return rep.all_pass() ? 0 : 3;
        } else if (*sw) {
            DeviceConfig cfg = lc->device;
            std::vector<double> lengths = parse_list(sw_lengths);
            double lmin = *std::min_element(lengths.begin(), lengths.end());
            if (!(lmin > 0)) throw UsageError("lengths must be positive");
            double w = 1.5 * total_spdc_bandwidth(cfg, lmin);
            SpectralGrid grid = SpectralGrid::uniform(-w, w, sw_n);
            fs::create_directories(sw_dir);
            ctx.out_dir = sw_dir;
            for (double L : lengths) {
                FluxSpectrum s = compute_spectrum(cfg, L, grid);
                char name[64];
                std::snprintf(name, sizeof name, "spectrum_L%gcm.csv", L);
                std::string path = (fs::path(sw_dir) / name).string();
                write_spectrum_csv(path, s);
                ctx.artifacts.push_back(path);
            }
        }
        write_manifest(ctx, *active);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParameterError& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 2;
    } catch (const AccuracyError& e) {
        std::cerr << "accuracy failure: " << e.what() << "\n";
        return 3;
    } catch (const TruncationError& e) {
        std::cerr << "truncation failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
