#pragma once
// Potential-function Breaker for a hypergraph game where Maker claims p and
// Breaker claims q elements per round. With 1 + mu = (1 + q)^(1/p),
//
//   Phi(M, B)    = sum over H with H and B disjoint of (1 + mu)^-|H \ M|
//   Phi(M, B, z) = the same sum restricted to H containing z,
//
// and Breaker repeatedly claims the open element maximising Phi(M, B, z).
// Against any Maker, Phi never increases from one Maker move to the next and
// at most (1 + q) f hyperedges end up fully Maker's, where
// f = sum over H of (1 + q)^(-|H| / p).

#include <cstdint>
#include <span>
#include <vector>

#include "mbg/engine.hpp"
#include "mbg/kernels.hpp"
#include "mbg/winsets.hpp"

namespace mbg {

struct FValue {
    long double f = 0;
    /// (1 + q) f: the bound on fully Maker hyperedges.
    long double bound = 0;
};

FValue f_value(const WinningFamily& family, double p, double q);

/// Incremental bookkeeping of Phi over a fixed family.
///
/// Per element z and per k, the table keeps the number of live hyperedges
/// through z that still miss k elements. Phi(M, B, z) is the weighted row
/// sum, so it never drifts from its definition.
class PotentialState {
public:
    PotentialState(FamilyPtr family, double p, double q);

    void maker_claim(ElementId e);
    void breaker_claim(ElementId e);
    /// Applies board claims not seen yet (own claims applied earlier are skipped).
    void sync(const Board& board);

    double one_plus_mu() const { return base_; }
    double weight(std::size_t k) const { return weights_[k]; }
    double element_potential(ElementId z) const;
    /// Phi(M, B) from the per-k histogram of live hyperedges.
    double total() const;
    /// Live hyperedges already fully Maker's.
    std::uint64_t fully_maker() const { return static_cast<std::uint64_t>(hist_[0]); }
    std::uint64_t live() const;

    /// Best open element for Breaker; npos when `eligible` is empty.
    kernels::ArgMax argmax(std::span<const std::uint8_t> eligible) const;

    const WinningFamily& family() const { return *family_; }
    bool applied(ElementId e) const { return applied_[e] != 0; }

private:
    FamilyPtr family_;
    double base_;
    std::size_t rows_;
    std::uint32_t stride_;
    std::vector<double> weights_;
    std::vector<double> counts_;
    std::vector<double> hist_;
    std::vector<std::uint16_t> missing_;
    std::vector<std::uint8_t> dead_;
    std::vector<std::uint8_t> applied_;
    std::size_t cursor_ = 0;
};

/// Phi(M, B) and Phi(M, B, z) recomputed from the board with compensated
/// long-double summation. Used to audit the incremental state.
long double potential_from_scratch(const WinningFamily& family, const Board& board, double p, double q);
long double element_potential_from_scratch(const WinningFamily& family, const Board& board, double p, double q,
                                           ElementId z);

/// Sequential argmax Breaker. q is the bias it plans with (normally the
/// game's Breaker bias); if fewer elements are open it claims them all.
class PotentialBreaker : public BreakerStrategy {
public:
    PotentialBreaker(FamilyPtr family, double p, double q);

    std::optional<double> potential(const GameView& view) override;
    std::vector<ElementId> respond(const GameView& view, std::uint32_t budget) override;
    std::string name() const override { return "potential"; }
    json info() const override;

    PotentialState& state() { return state_; }
    const PotentialState& state() const { return state_; }

private:
    PotentialState state_;
    double p_;
    double q_;
    std::vector<std::uint8_t> eligible_;
};

struct MonotonicityAudit {
    bool pass = true;
    /// First round r + 1 with Phi_{r+1} > Phi_r (1-based index into the series).
    std::optional<std::size_t> first_violation;
    bool start_bound_ok = true;
    double start = 0;
    double bound = 0;
};

/// Checks Phi(M_{r+1}, B_r) <= Phi(M_r, B_{r-1}) along the recorded series
/// (relative tolerance `rel_tol`) and Phi(M_1, B_0) <= (1 + q) f.
MonotonicityAudit audit_potentials(std::span<const double> potentials, double bound, double rel_tol = 1e-9);

}  // namespace mbg
