#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boostreg/core.hpp"

namespace boostreg {

enum class StreamKind { stationary, duffing, csv };

/// Where a sample stream comes from and how to synthesize it.
struct StreamSpec {
    StreamKind kind = StreamKind::stationary;
    std::int64_t length = 1000;
    double noise_var = 0.01;  // target noise variance (stationary only)
    double rho = 0.5;         // coordinate correlation (stationary only)
    std::uint64_t seed = 1;   // data RNG seed (stationary only)
    std::string path;         // csv only
    bool has_header = false;  // csv only
    int target_column = -1;   // csv only; -1 selects the last column
};

/// Correlated-Gaussian regression stream: T coordinate pairs are drawn
/// first (two normals per pair), each coordinate is min-max scaled over
/// the block into [0, 1], a bias 1 is appended, and the target is
/// d = x1 + x2 + 1 + noise with one further normal draw per sample.
/// Requires length >= 2; an all-equal coordinate block is rejected.
std::vector<Sample> gen_stationary(const StreamSpec& spec);

/// One step of the chaotic second-order recursion
/// x_next = 2.75 x_t - x_t^3 - 0.2 x_prev.
double duffing_next(double x_t, double x_prev);

/// Deterministic chaotic stream from the fixed origin x_{-1} = 0.9279,
/// x_0 = 0.1727: sample t carries x = [x_{t-1}, x_t, 1] and d = x_{t+1}.
/// Ignores seed and noise settings. Divergence beyond |x| > 1e6 aborts.
std::vector<Sample> gen_duffing(const StreamSpec& spec);

/// Parse a rectangular numeric CSV into raw samples: the target column
/// becomes d, every other column a feature in file order, no bias and no
/// scaling. Malformed input raises IoError naming the 1-based row.
std::vector<Sample> load_csv(const std::string& path, bool has_header, int target_column);

/// Two-pass min-max normalization of raw samples: every feature dimension
/// and the target are mapped by u -> 2 (u - min) / (max - min) - 1 onto
/// [-1, 1]; constant dimensions map to 0; a bias entry 1 is appended to
/// the features afterwards.
std::vector<Sample> normalize_minmax(const std::vector<Sample>& raw);

/// Materialize the stream a spec describes; CSV input is loaded and then
/// min-max normalized.
std::vector<Sample> make_stream(const StreamSpec& spec);

/// Fixed 9-significant-digit decimal formatting used for every CSV value
/// this project writes, so outputs are byte-stable.
std::string format_value(double v);

/// Write samples as header-less CSV rows "feature,...,target" using
/// format_value, ready for load_csv.
void write_stream_csv(const std::vector<Sample>& stream, const std::string& path);

}  // namespace boostreg
