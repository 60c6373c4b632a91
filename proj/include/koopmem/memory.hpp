#pragma once

#include "koopmem/similarity.hpp"

#include <iosfwd>
#include <optional>

namespace koopmem {

struct MemoryRecord {
    std::size_t t_prime = 0;  ///< end index of the stored window
    SpectralSignature signature;
    std::size_t matched_count = 0;
    std::size_t inserted_at = 0;  ///< insertion sequence number
};

struct MatchResult {
    std::size_t t_min = 0;
    double d_lambda = 0.0;
    double d_v = 0.0;
    double combined = 0.0;
};

/// Append-only store of past window signatures, optionally capped. When the
/// cap is exceeded the least-matched record goes first, oldest among equals.
class MemoryBank {
public:
    MemoryBank() = default;
    explicit MemoryBank(std::optional<std::size_t> capacity);

    /// Records must arrive with strictly increasing t_prime.
    void store(MemoryRecord rec);
    void store(const SpectralSignature& sig);

    /// Best admissible record: t_prime + delta < t, d_lambda < eps_lambda and
    /// d_v < eps_v, minimizing d_lambda + d_v (latest t_prime wins ties).
    std::optional<MatchResult> find_match(const SpectralSignature& sig, std::size_t t, int delta,
                                          double eps_lambda, double eps_v) const;

    /// Bumps matched_count of the record stored for t_prime.
    void mark_matched(std::size_t t_prime);

    /// Drops records until size() <= capacity. No-op when uncapped.
    void evict();

    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const std::vector<MemoryRecord>& records() const { return records_; }
    std::optional<std::size_t> capacity() const { return capacity_; }

    /// One JSON object per line: t_prime, eigenvalues and modes as [re, im]
    /// pairs, anchor, matched_count.
    void write_jsonl(std::ostream& out) const;
    static MemoryBank read_jsonl(std::istream& in, std::optional<std::size_t> capacity = std::nullopt);

private:
    std::vector<MemoryRecord> records_;
    std::optional<std::size_t> capacity_;
    std::size_t next_seq_ = 0;
};

}  // namespace koopmem
