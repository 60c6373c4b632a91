#include "koopmem/memory.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <ostream>

namespace koopmem {

using nlohmann::json;

MemoryBank::MemoryBank(std::optional<std::size_t> capacity) : capacity_(capacity) {
    if (capacity_ && *capacity_ == 0) throw Error("memory bank capacity must be >= 1");
}

void MemoryBank::store(MemoryRecord rec) {
    if (!records_.empty() && rec.t_prime <= records_.back().t_prime)
        throw Error("memory bank: out-of-order insert (t'=" + std::to_string(rec.t_prime) +
                    " after t'=" + std::to_string(records_.back().t_prime) + ")");
    rec.inserted_at = next_seq_++;
    records_.push_back(std::move(rec));
    if (capacity_ && records_.size() > *capacity_) evict();
}

void MemoryBank::store(const SpectralSignature& sig) {
    MemoryRecord rec;
    rec.t_prime = sig.t;
    rec.signature = sig;
    store(std::move(rec));
}

std::optional<MatchResult> MemoryBank::find_match(const SpectralSignature& sig, std::size_t t, int delta,
                                                  double eps_lambda, double eps_v) const {
    if (sig.fallback) throw Error("find_match: query signature is flagged as fallback");
    if (delta < 1) throw Error("find_match: delta must be >= 1");
    std::optional<MatchResult> best;
    for (const auto& rec : records_) {
        if (rec.t_prime + static_cast<std::size_t>(delta) >= t) continue;
        if (rec.signature.fallback) continue;
        const auto d = signature_distance(sig, rec.signature);
        if (!(d.d_lambda < eps_lambda && d.d_v < eps_v)) continue;
        // records are sorted by t_prime, but compare explicitly so the result
        // does not depend on storage order
        if (!best || d.combined < best->combined ||
            (d.combined == best->combined && rec.t_prime > best->t_min))
            best = MatchResult{rec.t_prime, d.d_lambda, d.d_v, d.combined};
    }
    return best;
}

void MemoryBank::mark_matched(std::size_t t_prime) {
    auto it = std::lower_bound(records_.begin(), records_.end(), t_prime,
                               [](const MemoryRecord& r, std::size_t t) { return r.t_prime < t; });
    if (it == records_.end() || it->t_prime != t_prime)
        throw Error("mark_matched: no record for t'=" + std::to_string(t_prime));
    ++it->matched_count;
}

void MemoryBank::evict() {
    if (!capacity_) return;
    while (records_.size() > *capacity_) {
        auto victim = std::min_element(records_.begin(), records_.end(), [](const auto& a, const auto& b) {
            if (a.matched_count != b.matched_count) return a.matched_count < b.matched_count;
            return a.t_prime < b.t_prime;
        });
        records_.erase(victim);
    }
}

namespace {

json complex_array(const Eigen::VectorXcd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
    return arr;
}

Eigen::VectorXcd complex_vector(const json& arr) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = cplx(arr[i].at(0).get<double>(), arr[i].at(1).get<double>());
    return v;
}

}  // namespace

void MemoryBank::write_jsonl(std::ostream& out) const {
    for (const auto& rec : records_) {
        json modes = json::array();
        for (Eigen::Index r = 0; r < rec.signature.scaled_modes.rows(); ++r)
            modes.push_back(complex_array(rec.signature.scaled_modes.row(r).transpose()));
        json line = {
            {"t_prime", rec.t_prime},
            {"eigenvalues", complex_array(rec.signature.eigenvalues)},
            {"modes", modes},
            {"anchor", rec.signature.anchor},
            {"matched_count", rec.matched_count},
            {"fallback", rec.signature.fallback},
        };
        out << line.dump() << '\n';
    }
}

MemoryBank MemoryBank::read_jsonl(std::istream& in, std::optional<std::size_t> capacity) {
    MemoryBank bank(capacity);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            const auto j = json::parse(line);
            MemoryRecord rec;
            rec.t_prime = j.at("t_prime").get<std::size_t>();
            rec.matched_count = j.at("matched_count").get<std::size_t>();
            auto& sig = rec.signature;
            sig.t = rec.t_prime;
            sig.anchor = j.at("anchor").get<double>();
            sig.fallback = j.value("fallback", false);
            sig.eigenvalues = complex_vector(j.at("eigenvalues"));
            const auto& modes = j.at("modes");
            const auto cols = modes.empty() ? 0 : modes[0].size();
            sig.scaled_modes.resize(static_cast<Eigen::Index>(modes.size()), static_cast<Eigen::Index>(cols));
            for (std::size_t r = 0; r < modes.size(); ++r) {
                if (modes[r].size() != cols) throw Error("ragged mode matrix");
                sig.scaled_modes.row(static_cast<Eigen::Index>(r)) = complex_vector(modes[r]).transpose();
            }
            bank.store(std::move(rec));
        } catch (const json::exception& e) {
            throw Error("bank snapshot line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return bank;
}

}  // namespace koopmem
