#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace blockfade {

// Rate bounds the front-end can evaluate. CSV spelling in to_string/from.
enum class Bound { lower, upper, coherent_capacity, fano, dt, na_coh, na_noncoh };

std::string to_string(Bound bound);
Bound bound_from_string(const std::string& name);

// Whether a bound is Monte Carlo backed (carries samples/seed provenance and
// uses the block-rounded effective n in sweeps).
bool is_monte_carlo(Bound bound);

// One record of a sweep: everything needed to redraw a curve or re-run the
// point. Rates are reported in bits per channel use at this boundary only;
// all internal computation is in nats.
struct SweepRow {
    double snr_db = 0.0;
    int T = 0;
    std::int64_t n = 0;
    std::int64_t L = 0;
    double epsilon = 0.0;
    Bound bound = Bound::coherent_capacity;
    double rate_bits_per_cu = 0.0;
    std::optional<double> stderr_bits;
    std::optional<std::int64_t> n_samples;
    std::optional<std::uint64_t> seed;

    bool operator==(const SweepRow&) const = default;
};

struct PointConfig {
    double snr_db = 10.0;
    int T = 0;
    std::int64_t n = 0;
    double epsilon = 1e-3;
    Bound bound = Bound::coherent_capacity;
    std::int64_t samples = 2'000'000;
    std::uint64_t seed = 1;
    int workers = 0;
};

/// Evaluates one bound at one operating point. Deterministic given the seed:
/// the effective sampling seed is derived from (seed, T, n, bound).
SweepRow eval_point(const PointConfig& config);

/// Sweep over the coherence time at fixed n. Monte Carlo bounds use
/// blocks = round(n / T) and record the effective n' = blocks * T in the n
/// column; closed-form bounds are evaluated at n as given. Rows come out in
/// ascending T.
std::vector<SweepRow> sweep_T(const PointConfig& base, int t_lo, int t_hi, int t_step);

/// Sweep over the block length at fixed T, ascending n.
std::vector<SweepRow> sweep_n(const PointConfig& base, const std::vector<std::int64_t>& ns);

struct TStarResult {
    int t_star = 0;
    double rate_bits_per_cu = 0.0;
    bool flat = false;  // runner-up within two combined standard errors
    std::vector<SweepRow> rows;
};

/// Coherence time maximizing the configured bound over the swept range.
/// Ties break toward smaller T.
TStarResult find_tstar(const PointConfig& base, int t_lo, int t_hi, int t_step);

/// CSV with the exact header
/// snr_db,T,n,L,epsilon,bound,rate_bits_per_cu,stderr_bits,n_samples,seed
/// and one newline-terminated line per row; absent optionals stay empty.
/// Floats round-trip exactly through parse_csv.
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);
std::vector<SweepRow> parse_csv(std::istream& in);

enum class FigurePreset { fig1, fig2, fig3, fig4 };

FigurePreset preset_from_string(const std::string& name);

/// Coherence-time grid of a T-sweep preset (fig1, fig3, fig4).
std::vector<int> preset_coherence_grid(FigurePreset preset);

/// Block-length grid of the n-sweep preset (fig2).
std::vector<std::int64_t> preset_blocklength_grid(FigurePreset preset);

/// Canned parameter grids reproducing the bundled study scenarios:
///   fig1: L, U, C_coh versus T at 10 dB;
///   fig2: fano, dt, na_noncoh, na_coh, C_coh versus n at T=50, eps=1e-3;
///   fig3: fano, dt, na_coh, C_coh versus T at n=4000, eps=1e-3;
///   fig4: same as fig3 at n=40000.
/// Rows are grouped by bound, ascending T (or n) within a group.
std::vector<SweepRow> preset_figure(FigurePreset preset, std::int64_t samples = 2'000'000,
                                    std::uint64_t seed = 1, int workers = 0);

}  // namespace blockfade
