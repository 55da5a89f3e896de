#pragma once

// Expectations over independent random signs: exact enumeration for small N,
// seeded Monte Carlo above the cap.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardy/geometry.hpp"

namespace hardy {

class PointSequence;

using SignPattern = std::vector<int>;

inline constexpr int kExactSignCap = 20;

enum class ExpectMethod { Auto, Exact, MonteCarlo };

struct ExpectOptions {
    ExpectMethod method = ExpectMethod::Auto;
    std::uint64_t samples = 1 << 16;
    /// Mandatory whenever Monte Carlo is used.
    std::optional<std::uint64_t> seed;
};

struct ExpectationEstimate {
    double value = 0.0;
    std::string method;  // "exact" or "monte-carlo"
    double stderr_value = 0.0;
    std::uint64_t samples = 0;
    std::optional<std::uint64_t> seed;
};

/// Mean of values in a fixed chunked-pairwise order, independent of how
/// many values are added between reads.
class PairwiseMean {
public:
    void add(double v);
    double sum() const;
    double mean() const { return count_ ? sum() / static_cast<double>(count_) : 0.0; }
    std::uint64_t count() const { return count_; }

private:
    static constexpr std::uint64_t kChunk = 1024;
    std::vector<double> chunks_;
    double current_ = 0.0;
    std::uint64_t in_chunk_ = 0;
    std::uint64_t count_ = 0;
};

/// Same for vectors of complex values (one accumulator per entry).
class PairwiseVectorMean {
public:
    explicit PairwiseVectorMean(std::size_t n) : current_(n, 0.0) {}
    void add(std::span<const cplx> v);
    std::vector<cplx> mean() const;

private:
    static constexpr std::uint64_t kChunk = 1024;
    std::vector<std::vector<cplx>> chunks_;
    std::vector<cplx> current_;
    std::uint64_t in_chunk_ = 0;
    std::uint64_t count_ = 0;
};

/// E[F(eps)] over eps in {-1, 1}^n.
ExpectationEstimate expect(const std::function<double(std::span<const int>)>& f, int n,
                           const ExpectOptions& opts = {});

/// How a sign sweep was carried out.
struct SignSweep {
    std::string method;
    std::uint64_t patterns = 0;
    std::optional<std::uint64_t> seed;
};

/// Visits sign patterns together with sum_a eps_a x_a for equal-length
/// vectors x_a. Exact sweeps walk all 2^N patterns in Gray-code order,
/// updating the sum by one vector per step and recomputing it every 1024
/// steps; Monte Carlo sweeps draw opts.samples seeded patterns.
SignSweep for_each_sign_sum(
    std::span<const std::vector<cplx>> x, const ExpectOptions& opts,
    const std::function<void(std::span<const int>, std::span<const cplx>)>& visit);

struct KhintchineResult {
    double ratio = 0.0;
    ExpectationEstimate expectation;
};

/// E|sum eps_a x_a|^q / (sum |x_a|^2)^(q/2).
KhintchineResult khintchine_ratio(std::span<const cplx> x, double q, const ExpectOptions& opts = {});

struct WeakChainReport {
    double q = 0.0;
    /// ||sum |mu_a|^2 |k_{q,a}|^2||_{q/2}^{q/2}
    double left = 0.0;
    /// E ||sum mu_a eps_a k_{q,a}||_q^q
    double middle = 0.0;
    /// D^q ||mu||_q^q with the supplied D
    double right = 0.0;
    double khintchine_factor = 0.0;  // middle / left
    double carleson_factor = 0.0;    // middle / right
    double constant_supplied = 0.0;
    /// max(D, best single-pattern ratio): still a lower bound of the true constant
    double constant_effective = 0.0;
    bool supplied_sufficient = false;
    bool holds = false;
    SignSweep sweep;
    double stderr_value = 0.0;
};

/// Checks ||sum |mu|^2 |k_{q,a}|^2||_{q/2}^{q/2} ~ E||sum mu eps k_{q,a}||_q^q <= D^q ||mu||_q^q.
WeakChainReport weak_from_carleson_check(const PointSequence& s, double q, std::span<const cplx> mu,
                                         const QuadratureRule& rule, double d_q,
                                         const ExpectOptions& opts = {});

}  // namespace hardy
