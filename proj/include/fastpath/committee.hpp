#pragma once

#include "fastpath/ids.hpp"
#include "fastpath/quantity.hpp"

#include <stdexcept>
#include <vector>

namespace fastpath {

// Validator committee with n = 3f + 1 members. Quorums have 2f+1 members,
// so any two quorums share at least f+1 validators (one of them honest).
class Committee {
public:
    Committee() = default;
    explicit Committee(std::uint32_t f) : f_(f), n_(3 * f + 1) {}

    static Committee with_size(std::uint32_t n) {
        if (n < 4 || (n - 1) % 3 != 0) throw std::invalid_argument("committee size must be 3f+1, f>=1");
        return Committee((n - 1) / 3);
    }

    std::uint32_t n() const { return n_; }
    std::uint32_t f() const { return f_; }
    std::uint32_t quorum_size() const { return 2 * f_ + 1; }

    // Budget fraction (f+1)/(2f+1), exact.
    Quantity eta() const { return Quantity(f_ + 1, 2 * f_ + 1); }

    bool contains(ValidatorId v) const { return v.index < n_; }
    std::vector<ValidatorId> members() const {
        std::vector<ValidatorId> out;
        out.reserve(n_);
        for (std::uint32_t i = 0; i < n_; ++i) out.push_back(ValidatorId{i});
        return out;
    }

    void encode(Encoder& enc) const { enc.u32(f_); }

private:
    std::uint32_t f_ = 1;
    std::uint32_t n_ = 4;
};

} // namespace fastpath
