#include "blockfade/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "blockfade/errors.hpp"
#include "blockfade/fbl.hpp"
#include "blockfade/rng.hpp"
#include "blockfade/specfun.hpp"

namespace blockfade {

namespace {

constexpr double kLn2 = 0.69314718055994531;

double db_to_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

std::uint64_t point_seed(std::uint64_t base, int t, std::int64_t n, Bound bound) {
    SplitMix64 sm{base};
    sm.state ^= 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(t + 1);
    sm.next();
    sm.state ^= 0xC2B2AE3D27D4EB4FULL * static_cast<std::uint64_t>(n + 1);
    sm.next();
    sm.state ^= 0x165667B19E3779F9ULL * (static_cast<std::uint64_t>(bound) + 1);
    return sm.next();
}

std::int64_t rounded_blocks(std::int64_t n, int t) {
    const auto blocks = static_cast<std::int64_t>(
        std::llround(static_cast<double>(n) / static_cast<double>(t)));
    return blocks < 1 ? 1 : blocks;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string to_string(Bound bound) {
    switch (bound) {
        case Bound::lower: return "L";
        case Bound::upper: return "U";
        case Bound::coherent_capacity: return "C_coh";
        case Bound::fano: return "fano";
        case Bound::dt: return "dt";
        case Bound::na_coh: return "na_coh";
        case Bound::na_noncoh: return "na_noncoh";
    }
    throw std::domain_error("to_string: unknown bound");
}

Bound bound_from_string(const std::string& name) {
    if (name == "L") return Bound::lower;
    if (name == "U") return Bound::upper;
    if (name == "C_coh") return Bound::coherent_capacity;
    if (name == "fano") return Bound::fano;
    if (name == "dt") return Bound::dt;
    if (name == "na_coh") return Bound::na_coh;
    if (name == "na_noncoh") return Bound::na_noncoh;
    throw std::domain_error("unknown bound name: " + name);
}

bool is_monte_carlo(Bound bound) { return bound == Bound::dt || bound == Bound::na_noncoh; }

SweepRow eval_point(const PointConfig& config) {
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
        throw std::domain_error("eval_point: epsilon must lie in (0, 1)");
    const bool needs_t = config.bound != Bound::coherent_capacity;
    if (needs_t && config.T < 2)
        throw std::domain_error("eval_point: bound '" + to_string(config.bound) +
                                "' requires coherence time T >= 2");
    const bool needs_n = config.bound == Bound::fano || config.bound == Bound::dt ||
                         config.bound == Bound::na_coh || config.bound == Bound::na_noncoh;
    if (needs_n && config.n < 1)
        throw std::domain_error("eval_point: bound '" + to_string(config.bound) +
                                "' requires a block length n >= 1");

    const double rho = db_to_linear(config.snr_db);
    const QuadratureSpec quad;
    const specfun::Tolerance tol{1e-10, 1e-12, 400};

    SweepRow row;
    row.snr_db = config.snr_db;
    row.T = config.T;
    row.n = config.n;
    row.L = (config.T >= 1 && config.n >= 1) ? rounded_blocks(config.n, config.T) : 0;
    row.epsilon = config.epsilon;
    row.bound = config.bound;

    double rate_nats = 0.0;
    switch (config.bound) {
        case Bound::lower:
            rate_nats = lower_bound_L(ChannelParams(config.T, rho), quad);
            break;
        case Bound::upper:
            rate_nats = upper_bound_U(ChannelParams(config.T, rho), tol).first;
            break;
        case Bound::coherent_capacity:
            rate_nats = coherent_capacity(rho, quad);
            break;
        case Bound::fano: {
            const double cap_ub = upper_bound_U(ChannelParams(config.T, rho), tol).first;
            rate_nats = fano_upper(cap_ub, config.n, config.epsilon);
            break;
        }
        case Bound::na_coh:
            rate_nats = normal_approx_coh(ChannelParams(config.T, rho), config.n, config.epsilon,
                                          quad);
            break;
        case Bound::dt: {
            const ChannelParams params(config.T, rho);
            const std::int64_t blocks = rounded_blocks(config.n, config.T);
            const std::int64_t n_eff = blocks * config.T;
            const std::uint64_t seed = point_seed(config.seed, config.T, config.n, config.bound);
            const FblSpec spec(n_eff, blocks, config.epsilon, params);
            const DtSearchResult dt =
                dt_rate(spec, config.samples, seed, 1 << 15, config.workers);
            rate_nats = dt.rate;
            row.n = n_eff;
            row.L = blocks;
            row.stderr_bits = dt.log_m_std_error / static_cast<double>(n_eff) / kLn2;
            row.n_samples = config.samples;
            row.seed = seed;
            break;
        }
        case Bound::na_noncoh: {
            const ChannelParams params(config.T, rho);
            const std::int64_t blocks = rounded_blocks(config.n, config.T);
            const std::int64_t n_eff = blocks * config.T;
            const std::uint64_t seed = point_seed(config.seed, config.T, config.n, config.bound);
            const McEstimate vbar =
                vbar_estimate(params, config.samples, seed, 1 << 15, config.workers);
            rate_nats = normal_approx_noncoh(params, n_eff, config.epsilon, vbar, quad);
            row.n = n_eff;
            row.L = blocks;
            // Rate sensitivity to the vbar estimate, delta method.
            const double dr_dv = vbar.mean > 0.0
                                     ? specfun::q_inv(config.epsilon) /
                                           (2.0 * std::sqrt(vbar.mean * static_cast<double>(n_eff)))
                                     : 0.0;
            row.stderr_bits = dr_dv * vbar.std_error / kLn2;
            row.n_samples = config.samples;
            row.seed = seed;
            break;
        }
    }
    row.rate_bits_per_cu = rate_nats / kLn2;
    return row;
}

std::vector<SweepRow> sweep_T(const PointConfig& base, int t_lo, int t_hi, int t_step) {
    if (t_step < 1) throw std::domain_error("sweep_T: step must be >= 1");
    if (t_hi < t_lo) throw std::domain_error("sweep_T: empty coherence-time range");
    if (t_lo < 2) throw std::domain_error("sweep_T: coherence time starts at 2");
    if (base.n >= 1 && static_cast<std::int64_t>(t_hi) > base.n / 2)
        throw std::domain_error("sweep_T: range must stay within [2, n/2]");
    std::vector<SweepRow> rows;
    for (int t = t_lo; t <= t_hi; t += t_step) {
        PointConfig config = base;
        config.T = t;
        rows.push_back(eval_point(config));
    }
    return rows;
}

std::vector<SweepRow> sweep_n(const PointConfig& base, const std::vector<std::int64_t>& ns) {
    if (ns.empty()) throw std::domain_error("sweep_n: empty block-length list");
    std::vector<std::int64_t> sorted = ns;
    std::sort(sorted.begin(), sorted.end());
    std::vector<SweepRow> rows;
    for (const std::int64_t n : sorted) {
        PointConfig config = base;
        config.n = n;
        rows.push_back(eval_point(config));
    }
    return rows;
}

TStarResult find_tstar(const PointConfig& base, int t_lo, int t_hi, int t_step) {
    TStarResult result;
    result.rows = sweep_T(base, t_lo, t_hi, t_step);

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        if (result.rows[i].rate_bits_per_cu > result.rows[best].rate_bits_per_cu) best = i;
    }
    result.t_star = result.rows[best].T;
    result.rate_bits_per_cu = result.rows[best].rate_bits_per_cu;

    if (is_monte_carlo(base.bound) && result.rows.size() > 1) {
        std::size_t runner = best == 0 ? 1 : 0;
        for (std::size_t i = 0; i < result.rows.size(); ++i) {
            if (i == best) continue;
            if (result.rows[i].rate_bits_per_cu > result.rows[runner].rate_bits_per_cu) runner = i;
        }
        const auto& b = result.rows[best];
        const auto& r = result.rows[runner];
        if (b.stderr_bits && r.stderr_bits) {
            const double combined = std::sqrt((*b.stderr_bits) * (*b.stderr_bits) +
                                              (*r.stderr_bits) * (*r.stderr_bits));
            result.flat = (b.rate_bits_per_cu - r.rate_bits_per_cu) <= 2.0 * combined;
        }
    }
    return result;
}

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    if (rows.empty()) throw std::domain_error("emit_csv: no rows to emit");
    out << "snr_db,T,n,L,epsilon,bound,rate_bits_per_cu,stderr_bits,n_samples,seed\n";
    for (const auto& row : rows) {
        out << format_double(row.snr_db) << ',' << row.T << ',' << row.n << ',' << row.L << ','
            << format_double(row.epsilon) << ',' << to_string(row.bound) << ','
            << format_double(row.rate_bits_per_cu) << ',';
        if (row.stderr_bits) out << format_double(*row.stderr_bits);
        out << ',';
        if (row.n_samples) out << *row.n_samples;
        out << ',';
        if (row.seed) out << *row.seed;
        out << '\n';
    }
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
    emit_csv(rows, file);
    file.flush();
    if (!file) throw std::runtime_error("emit_csv: write to '" + path + "' failed");
}

std::vector<SweepRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("parse_csv: missing header");
    if (line != "snr_db,T,n,L,epsilon,bound,rate_bits_per_cu,stderr_bits,n_samples,seed")
        throw std::runtime_error("parse_csv: unexpected header: " + line);

    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::stringstream ss(line);
        while (std::getline(ss, field, ',')) fields.push_back(field);
        while (fields.size() < 10) fields.emplace_back();  // trailing empties
        if (fields.size() != 10)
            throw std::runtime_error("parse_csv: expected 10 fields, got line: " + line);

        SweepRow row;
        row.snr_db = std::stod(fields[0]);
        row.T = std::stoi(fields[1]);
        row.n = std::stoll(fields[2]);
        row.L = std::stoll(fields[3]);
        row.epsilon = std::stod(fields[4]);
        row.bound = bound_from_string(fields[5]);
        row.rate_bits_per_cu = std::stod(fields[6]);
        if (!fields[7].empty()) row.stderr_bits = std::stod(fields[7]);
        if (!fields[8].empty()) row.n_samples = std::stoll(fields[8]);
        if (!fields[9].empty()) row.seed = std::stoull(fields[9]);
        rows.push_back(row);
    }
    return rows;
}

FigurePreset preset_from_string(const std::string& name) {
    if (name == "fig1") return FigurePreset::fig1;
    if (name == "fig2") return FigurePreset::fig2;
    if (name == "fig3") return FigurePreset::fig3;
    if (name == "fig4") return FigurePreset::fig4;
    throw std::domain_error("unknown preset: " + name);
}

std::vector<int> preset_coherence_grid(FigurePreset preset) {
    switch (preset) {
        case FigurePreset::fig1: {
            std::vector<int> ts;
            for (int t = 2; t <= 20; ++t) ts.push_back(t);
            for (int t = 25; t <= 200; t += 5) ts.push_back(t);
            return ts;
        }
        case FigurePreset::fig3:
        case FigurePreset::fig4: {
            const std::int64_t n = preset == FigurePreset::fig3 ? 4000 : 40000;
            std::vector<int> ts = {2,   4,   6,   8,   10,  13,  16,  20,  24,   28,  32,
                                   40,  48,  56,  64,  72,  80,  96,  112, 128,  160, 200,
                                   256, 320, 400, 500, 640, 800, 1000, 1280, 1600, 2000};
            std::erase_if(ts, [n](int t) { return static_cast<std::int64_t>(t) > n / 2; });
            return ts;
        }
        case FigurePreset::fig2:
            break;
    }
    throw std::domain_error("preset_coherence_grid: preset sweeps the block length, not T");
}

std::vector<std::int64_t> preset_blocklength_grid(FigurePreset preset) {
    if (preset != FigurePreset::fig2)
        throw std::domain_error("preset_blocklength_grid: preset sweeps T, not the block length");
    return {100, 200, 300, 500, 700, 1000, 1500, 2000, 3000, 4000, 6000, 8000, 10000};
}

std::vector<SweepRow> preset_figure(FigurePreset preset, std::int64_t samples, std::uint64_t seed,
                                    int workers) {
    PointConfig base;
    base.snr_db = 10.0;
    base.epsilon = 1e-3;
    base.samples = samples;
    base.seed = seed;
    base.workers = workers;

    std::vector<SweepRow> rows;
    const auto run_t_grid = [&](const std::vector<Bound>& bounds, const std::vector<int>& ts,
                                std::int64_t n) {
        for (const Bound bound : bounds) {
            for (const int t : ts) {
                PointConfig config = base;
                config.bound = bound;
                config.T = t;
                config.n = n;
                rows.push_back(eval_point(config));
            }
        }
    };

    switch (preset) {
        case FigurePreset::fig1:
            run_t_grid({Bound::lower, Bound::upper, Bound::coherent_capacity},
                       preset_coherence_grid(preset), 0);
            break;
        case FigurePreset::fig2: {
            for (const Bound bound : {Bound::fano, Bound::dt, Bound::na_noncoh, Bound::na_coh,
                                      Bound::coherent_capacity}) {
                PointConfig config = base;
                config.bound = bound;
                config.T = 50;
                auto swept = sweep_n(config, preset_blocklength_grid(preset));
                rows.insert(rows.end(), swept.begin(), swept.end());
            }
            break;
        }
        case FigurePreset::fig3:
            run_t_grid({Bound::fano, Bound::dt, Bound::na_coh, Bound::coherent_capacity},
                       preset_coherence_grid(preset), 4000);
            break;
        case FigurePreset::fig4:
            run_t_grid({Bound::fano, Bound::dt, Bound::na_coh, Bound::coherent_capacity},
                       preset_coherence_grid(preset), 40000);
            break;
    }
    return rows;
}

}  // namespace blockfade
