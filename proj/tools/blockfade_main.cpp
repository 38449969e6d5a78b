// blockfade: rate bounds for noncoherent Rayleigh block-fading channels at
// finite block length. Emits CSV rows (one per evaluated point) on stdout or
// into --out; all diagnostics go to stderr.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blockfade/errors.hpp"
#include "blockfade/sweep.hpp"

namespace {

struct SweepRange {
    int lo = 0, hi = 0, step = 1;
};

SweepRange parse_range(const std::string& text) {
    SweepRange range;
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw CLI::ValidationError("--sweep-T expects lo:hi:step");
    range.lo = std::stoi(text.substr(0, first));
    range.hi = std::stoi(text.substr(first + 1, second - first - 1));
    range.step = std::stoi(text.substr(second + 1));
    return range;
}

void write_rows(const std::vector<blockfade::SweepRow>& rows, const std::string& out_path) {
    if (out_path.empty()) {
        blockfade::emit_csv(rows, std::cout);
    } else {
        blockfade::emit_csv(rows, out_path);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-blocklength rate bounds for the noncoherent Rayleigh "
                 "block-fading channel"};
    app.set_config("--config", "", "key=value file mirroring the flags; flags override it");

    blockfade::PointConfig config;
    std::string bound_name;
    std::string sweep_t_text;
    std::vector<std::int64_t> sweep_n_values;
    std::string preset_name;
    std::string out_path;
    bool find_tstar_flag = false;
    bool exact_flag = false;

    app.add_option("--snr-db", config.snr_db, "SNR in dB")->capture_default_str();
    app.add_option("--T", config.T, "Channel coherence time in channel uses (>= 2)");
    app.add_option("--n", config.n, "Block length in channel uses");
    app.add_option("--epsilon", config.epsilon, "Target block error probability")
        ->capture_default_str();
    app.add_option("--bound", bound_name,
                   "Bound to evaluate: L, U, C_coh, fano, dt, na_coh, na_noncoh");
    app.add_option("--sweep-T", sweep_t_text, "Coherence-time sweep as lo:hi:step");
    app.add_option("--sweep-n", sweep_n_values, "Comma-separated block lengths to sweep")
        ->delimiter(',');
    app.add_option("--samples", config.samples, "Monte Carlo samples per estimate")
        ->capture_default_str();
    app.add_option("--seed", config.seed, "Base RNG seed")->capture_default_str();
    app.add_option("--workers", config.workers,
                   "Worker threads (0 = all cores; results do not depend on this)")
        ->capture_default_str();
    app.add_option("--out", out_path, "Write CSV here instead of stdout");
    auto* preset_opt =
        app.add_option("--preset", preset_name, "Canned scenario: fig1, fig2, fig3, fig4");
    auto* tstar_opt = app.add_flag("--find-tstar", find_tstar_flag,
                                   "Report the rate-maximizing coherence time of a T sweep");
    app.add_flag("--exact", exact_flag,
                 "Use the dependence-testing bound instead of its normal approximation "
                 "in the T* search");
    preset_opt->excludes(tstar_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!preset_name.empty()) {
            const auto rows = blockfade::preset_figure(blockfade::preset_from_string(preset_name),
                                                       config.samples, config.seed, config.workers);
            write_rows(rows, out_path);
            return 0;
        }

        if (!bound_name.empty()) config.bound = blockfade::bound_from_string(bound_name);

        if (find_tstar_flag) {
            if (config.n < 4) throw CLI::ValidationError("--find-tstar requires --n of at least 4");
            config.bound = exact_flag
                               ? blockfade::Bound::dt
                               : (!bound_name.empty() ? config.bound : blockfade::Bound::na_noncoh);
            SweepRange range{2, static_cast<int>(std::min<std::int64_t>(config.n / 2, 256)), 2};
            if (!sweep_t_text.empty()) range = parse_range(sweep_t_text);
            const auto result = blockfade::find_tstar(config, range.lo, range.hi, range.step);
            std::cerr << "T* = " << result.t_star << " with "
                      << blockfade::to_string(config.bound) << " = " << result.rate_bits_per_cu
                      << " bits/cu";
            if (result.flat)
                std::cerr << " (flat: runner-up within two combined standard errors)";
            std::cerr << '\n';
            for (const auto& row : result.rows) {
                if (row.T == result.t_star) {
                    write_rows({row}, out_path);
                    break;
                }
            }
            return 0;
        }

        if (!sweep_t_text.empty()) {
            if (bound_name.empty())
                throw CLI::ValidationError("--sweep-T needs --bound (or use --find-tstar)");
            const SweepRange range = parse_range(sweep_t_text);
            write_rows(blockfade::sweep_T(config, range.lo, range.hi, range.step), out_path);
            return 0;
        }

        if (!sweep_n_values.empty()) {
            if (bound_name.empty()) throw CLI::ValidationError("--sweep-n needs --bound");
            write_rows(blockfade::sweep_n(config, sweep_n_values), out_path);
            return 0;
        }

        if (bound_name.empty())
            throw CLI::ValidationError("nothing to do: give --bound, --sweep-T, --sweep-n, "
                                       "--find-tstar or --preset");
        write_rows({blockfade::eval_point(config)}, out_path);
        return 0;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const blockfade::NumericsError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
