#include "mbg/potential.hpp"

#include <cmath>

#include "mbg/errors.hpp"

namespace mbg {

namespace {

/// Neumaier compensated sum.
struct CompensatedSum {
    long double sum = 0;
    long double comp = 0;
    void add(long double x) {
        const long double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) comp += (sum - t) + x;
        else comp += (x - t) + sum;
        sum = t;
    }
    long double value() const { return sum + comp; }
};

void check_biases(double p, double q) {
    if (!(p >= 1.0) || !(q >= 1.0)) throw PreconditionFault("potential strategy needs p >= 1 and q >= 1");
}

}  // namespace

FValue f_value(const WinningFamily& family, double p, double q) {
    check_biases(p, q);
    CompensatedSum s;
    const long double base = 1.0L + static_cast<long double>(q);
    for (std::size_t i = 0; i < family.size(); ++i)
        s.add(std::pow(base, -static_cast<long double>(family.hyperedge(i).size()) / static_cast<long double>(p)));
    return {s.value(), base * s.value()};
}

PotentialState::PotentialState(FamilyPtr family, double p, double q) : family_(std::move(family)) {
    check_biases(p, q);
    if (!family_) throw PreconditionFault("potential state needs a family");
    base_ = std::pow(1.0 + q, 1.0 / p);
    rows_ = family_->max_edge_size() + 1;
    stride_ = family_->universe();
    weights_.resize(rows_);
    for (std::size_t k = 0; k < rows_; ++k) weights_[k] = std::pow(1.0 + q, -static_cast<double>(k) / p);
    counts_.assign(rows_ * stride_, 0.0);
    hist_.assign(rows_, 0.0);
    missing_.resize(family_->size());
    dead_.assign(family_->size(), 0);
    applied_.assign(stride_, 0);
    for (std::size_t h = 0; h < family_->size(); ++h) {
        const auto edge = family_->hyperedge(h);
        const std::size_t k = edge.size();
        missing_[h] = static_cast<std::uint16_t>(k);
        hist_[k] += 1.0;
        double* row = counts_.data() + k * stride_;
        for (auto z : edge) row[z] += 1.0;
    }
}

void PotentialState::maker_claim(ElementId e) {
    if (applied_[e]) throw InvariantViolation("potential state: element claimed twice");
    applied_[e] = 1;
    for (auto h : family_->containing(e)) {
        if (dead_[h]) continue;
        const std::size_t k = missing_[h];
        double* from = counts_.data() + k * stride_;
        double* to = counts_.data() + (k - 1) * stride_;
        for (auto z : family_->hyperedge(h)) {
            from[z] -= 1.0;
            to[z] += 1.0;
        }
        hist_[k] -= 1.0;
        hist_[k - 1] += 1.0;
        missing_[h] = static_cast<std::uint16_t>(k - 1);
    }
}

void PotentialState::breaker_claim(ElementId e) {
    if (applied_[e]) throw InvariantViolation("potential state: element claimed twice");
    applied_[e] = 2;
    for (auto h : family_->containing(e)) {
        if (dead_[h]) continue;
        dead_[h] = 1;
        const std::size_t k = missing_[h];
        double* row = counts_.data() + k * stride_;
        for (auto z : family_->hyperedge(h)) row[z] -= 1.0;
        hist_[k] -= 1.0;
    }
}

void PotentialState::sync(const Board& board) {
    if (board.universe_size() != stride_) throw InvalidBoard("potential family universe does not match the board");
    const auto hist = board.history();
    for (; cursor_ < hist.size(); ++cursor_) {
        const auto& rec = hist[cursor_];
        const std::uint8_t want = rec.player == Player::Maker ? 1 : 2;
        if (applied_[rec.element] == want) continue;
        if (applied_[rec.element] != 0) throw InvariantViolation("potential state disagrees with the board");
        if (rec.player == Player::Maker) maker_claim(rec.element);
        else breaker_claim(rec.element);
    }
}

double PotentialState::element_potential(ElementId z) const {
    double s = 0.0;
    for (std::size_t k = 0; k < rows_; ++k) s = s + weights_[k] * counts_[k * stride_ + z];
    return s;
}

double PotentialState::total() const {
    double s = 0.0;
    for (std::size_t k = 0; k < rows_; ++k) s = s + weights_[k] * hist_[k];
    return s;
}

std::uint64_t PotentialState::live() const {
    double s = 0;
    for (auto h : hist_) s += h;
    return static_cast<std::uint64_t>(s);
}

kernels::ArgMax PotentialState::argmax(std::span<const std::uint8_t> eligible) const {
    return kernels::weighted_argmax(counts_, stride_, weights_, eligible);
}

long double potential_from_scratch(const WinningFamily& family, const Board& board, double p, double q) {
    check_biases(p, q);
    const long double base = std::pow(1.0L + static_cast<long double>(q), 1.0L / static_cast<long double>(p));
    CompensatedSum s;
    for (std::size_t h = 0; h < family.size(); ++h) {
        int missing = 0;
        bool dead = false;
        for (auto z : family.hyperedge(h)) {
            const auto st = board.state(z);
            if (st == ClaimState::Breaker) dead = true;
            else if (st == ClaimState::Unclaimed) ++missing;
        }
        if (!dead) s.add(std::pow(base, -static_cast<long double>(missing)));
    }
    return s.value();
}

long double element_potential_from_scratch(const WinningFamily& family, const Board& board, double p, double q,
                                           ElementId z) {
    check_biases(p, q);
    const long double base = std::pow(1.0L + static_cast<long double>(q), 1.0L / static_cast<long double>(p));
    CompensatedSum s;
    for (auto h : family.containing(z)) {
        int missing = 0;
        bool dead = false;
        for (auto y : family.hyperedge(h)) {
            const auto st = board.state(y);
            if (st == ClaimState::Breaker) dead = true;
            else if (st == ClaimState::Unclaimed) ++missing;
        }
        if (!dead) s.add(std::pow(base, -static_cast<long double>(missing)));
    }
    return s.value();
}

PotentialBreaker::PotentialBreaker(FamilyPtr family, double p, double q) : state_(std::move(family), p, q), p_(p), q_(q) {}

std::optional<double> PotentialBreaker::potential(const GameView& view) {
    state_.sync(view.board);
    return state_.total();
}

std::vector<ElementId> PotentialBreaker::respond(const GameView& view, std::uint32_t budget) {
    state_.sync(view.board);
    const auto open = view.board.open_mask();
    eligible_.assign(open.begin(), open.end());
    std::vector<ElementId> picks;
    picks.reserve(budget);
    for (std::uint32_t j = 0; j < budget; ++j) {
        const auto best = state_.argmax(eligible_);
        if (best.index == kernels::ArgMax::npos) break;
        const auto e = static_cast<ElementId>(best.index);
        picks.push_back(e);
        eligible_[e] = 0;
        state_.breaker_claim(e);
    }
    return picks;
}

json PotentialBreaker::info() const {
    const auto fv = f_value(state_.family(), p_, q_);
    return {{"strategy", "potential"},
            {"p", p_},
            {"q", q_},
            {"one_plus_mu", state_.one_plus_mu()},
            {"family", state_.family().label()},
            {"family_size", state_.family().size()},
            {"f", static_cast<double>(fv.f)},
            {"bound", static_cast<double>(fv.bound)}};
}

MonotonicityAudit audit_potentials(std::span<const double> potentials, double bound, double rel_tol) {
    MonotonicityAudit a;
    a.bound = bound;
    if (potentials.empty()) return a;
    a.start = potentials[0];
    a.start_bound_ok = potentials[0] <= bound * (1.0 + rel_tol) + 1e-300;
    for (std::size_t i = 1; i < potentials.size(); ++i) {
        const double prev = potentials[i - 1];
        if (potentials[i] > prev + rel_tol * std::fabs(prev) + 1e-300) {
            a.first_violation = i + 1;
            break;
        }
    }
    a.pass = !a.first_violation && a.start_bound_ok;
    return a;
}

}  // namespace mbg
