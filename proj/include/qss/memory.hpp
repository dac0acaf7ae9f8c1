#ifndef QSS_MEMORY_HPP
#define QSS_MEMORY_HPP

// Wire-oriented quantum memory shared by all protocols.  Wires are allocated
// and discarded dynamically; internally the state is kept factored into
// independent blocks that merge when a gate spans two of them and shrink when
// wires collapse to classical values.  The same interface runs on three
// engines:
//
//   Stabilizer  — tableau per block; Clifford gates only, full protocol scale
//   Statevector — dense amplitudes per block; universal, tiny registers only
//   Share       — one classical field element per wire; basis-permuting gates
//                 (incl. Toffoli); superposition preparation draws a uniform
//                 classical value instead
//
// Each wire carries an owner tag so the protocol engine can confine adversary
// callbacks to corrupted players' wires.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "qss/circuit.hpp"
#include "qss/errors.hpp"
#include "qss/pauli.hpp"
#include "qss/rng.hpp"
#include "qss/statevector.hpp"
#include "qss/tableau.hpp"

namespace qss {

enum class BackendKind { Stabilizer, Statevector, Share };

inline const char* backend_name(BackendKind k) {
    switch (k) {
        case BackendKind::Stabilizer: return "stabilizer";
        case BackendKind::Statevector: return "statevector";
        case BackendKind::Share: return "share";
    }
    return "?";
}

using WireId = std::uint32_t;

// owner tags: players are 0..n-1; kOwnerProtocol marks dealer-prepared wires
// in transit or public scratch space
constexpr std::uint32_t kOwnerProtocol = 0xffffffffu;

class QuantumMemory {
  public:
    QuantumMemory(BackendKind kind, std::uint32_t p) : kind_(kind), p_(p) {}

    BackendKind kind() const { return kind_; }
    std::uint32_t p() const { return p_; }

    WireId alloc(bool plus, CounterRng& rng, std::uint32_t owner = kOwnerProtocol) {
        WireId w = WireId(wires_.size());
        wires_.push_back(WireInfo{});
        WireInfo& info = wires_.back();
        info.owner = owner;
        info.alive = true;
        if (kind_ == BackendKind::Share) {
            info.classical = plus ? rng.field_element(p_) : 0;
            info.block = kNoBlock;
        } else if (plus) {
            info.block = new_block({w});
            fourier(w, 1, rng);
        } else {
            // basis states stay classical until a gate entangles them
            info.classical = 0;
            info.block = kNoBlock;
        }
        return w;
    }

    WireId alloc_zero(CounterRng& rng, std::uint32_t owner = kOwnerProtocol) {
        return alloc(false, rng, owner);
    }
    WireId alloc_plus(CounterRng& rng, std::uint32_t owner = kOwnerProtocol) {
        return alloc(true, rng, owner);
    }

    std::uint32_t owner(WireId w) const { return wires_.at(w).owner; }
    void set_owner(WireId w, std::uint32_t o) { wires_.at(w).owner = o; }
    bool alive(WireId w) const { return w < wires_.size() && wires_[w].alive; }

    // --- gates --------------------------------------------------------------

    void apply_gate(const GateOp& g, const std::vector<WireId>& ws, CounterRng& rng) {
        switch (g.kind) {
            case GateKind::XShift: x(ws[0], g.param, rng); break;
            case GateKind::ZPhase: z(ws[0], g.param, rng); break;
            case GateKind::CAdd: cadd(g.param, ws[0], ws[1], rng); break;
            case GateKind::Mul: mul(ws[0], g.param, rng); break;
            case GateKind::Swap: swap_wires(ws[0], ws[1], rng); break;
            case GateKind::Fourier: fourier(ws[0], g.param, rng); break;
            case GateKind::FourierInv: fourier_inv(ws[0], g.param, rng); break;
            case GateKind::Toffoli: toffoli(ws[0], ws[1], ws[2], rng); break;
            case GateKind::Measure: measure(ws[0], rng); break;
            case GateKind::PrepZero: prep(ws[0], false, rng); break;
            case GateKind::PrepPlus: prep(ws[0], true, rng); break;
            case GateKind::Discard: discard(ws[0], rng); break;
        }
    }

    void prep(WireId w, bool plus, CounterRng& rng) {
        require_alive(w);
        if (kind_ == BackendKind::Share) {
            wires_[w].classical = plus ? rng.field_element(p_) : 0;
            return;
        }
        Fe o = measure(w, rng);
        if (o) x(w, Fe(p_ - o), rng);
        if (plus) fourier(w, 1, rng);
    }

    void x(WireId w, Fe c, CounterRng& rng) {
        require_alive(w);
        if (c % p_ == 0) return;
        if (kind_ == BackendKind::Share || wires_[w].block == kNoBlock) {
            wires_[w].classical = fp::add(p_, wires_[w].classical, c % p_);
            return;
        }
        Block& b = block(wires_[w].block);
        std::uint32_t col = std::uint32_t(column_of(b, w));
        if (kind_ == BackendKind::Stabilizer) b.tab->apply_x(col, c);
        else b.sv->apply_x(col, c % p_);
        (void)rng;
    }
    void z(WireId w, Fe c, CounterRng& rng) {
        require_alive(w);
        if (kind_ == BackendKind::Share) return;  // invisible on classical data
        if (wires_[w].block == kNoBlock) return;  // global phase on a basis state
        Block& b = block(wires_[w].block);
        std::uint32_t col = std::uint32_t(column_of(b, w));
        if (kind_ == BackendKind::Stabilizer) b.tab->apply_z(col, c);
        else b.sv->apply_z(col, c % p_);
        (void)rng;
    }
    void mul(WireId w, Fe c, CounterRng& rng) {
        require_alive(w);
        if (c % p_ == 0) throw Error("mul factor must be nonzero");
        if (kind_ == BackendKind::Share || wires_[w].block == kNoBlock) {
            wires_[w].classical = fp::mul(p_, wires_[w].classical, c % p_);
            return;
        }
        Block& b = block(wires_[w].block);
        std::uint32_t col = std::uint32_t(column_of(b, w));
        if (kind_ == BackendKind::Stabilizer) b.tab->apply_mul(col, c);
        else b.sv->apply_mul(col, c % p_);
        (void)rng;
    }
    void fourier(WireId w, Fe r, CounterRng& rng) { fourier_impl(w, r, false, rng); }
    void fourier_inv(WireId w, Fe r, CounterRng& rng) { fourier_impl(w, r, true, rng); }
    void cadd(Fe b, WireId src, WireId dst, CounterRng& rng) {
        require_alive(src);
        require_alive(dst);
        b %= p_;
        if (b == 0) return;
        if (kind_ == BackendKind::Share) {
            wires_[dst].classical = fp::add(
                p_, wires_[dst].classical, fp::mul(p_, b, wires_[src].classical));
            return;
        }
        // classical control shortcut: a frozen source only shifts the target
        if (wires_[src].block == kNoBlock) {
            x(dst, fp::mul(p_, b, wires_[src].classical), rng);
            return;
        }
        Block& blk = same_block(src, dst, rng);
        std::uint32_t cs = std::uint32_t(column_of(blk, src));
        std::uint32_t cd = std::uint32_t(column_of(blk, dst));
        if (kind_ == BackendKind::Stabilizer) blk.tab->apply_cadd(cs, cd, b);
        else blk.sv->apply_cadd(cs, cd, b);
    }
    void swap_wires(WireId a, WireId b, CounterRng& rng) {
        require_alive(a);
        require_alive(b);
        if (kind_ == BackendKind::Share) {
            std::swap(wires_[a].classical, wires_[b].classical);
            return;
        }
        if (wires_[a].block == kNoBlock && wires_[b].block == kNoBlock) {
            std::swap(wires_[a].classical, wires_[b].classical);
            return;
        }
        Block& blk = same_block(a, b, rng);
        std::uint32_t ca = std::uint32_t(column_of(blk, a));
        std::uint32_t cb = std::uint32_t(column_of(blk, b));
        if (kind_ == BackendKind::Stabilizer) blk.tab->apply_swap(ca, cb);
        else blk.sv->apply_swap(ca, cb);
    }
    void toffoli(WireId a, WireId b, WireId c, CounterRng& rng) {
        require_alive(a);
        require_alive(b);
        require_alive(c);
        if (kind_ == BackendKind::Share) {
            wires_[c].classical =
                fp::add(p_, wires_[c].classical,
                        fp::mul(p_, wires_[a].classical, wires_[b].classical));
            return;
        }
        bool aw = wires_[a].block == kNoBlock;
        bool bw = wires_[b].block == kNoBlock;
        if (kind_ == BackendKind::Stabilizer) {
            if (aw || bw) {
                Fe scale = aw ? wires_[a].classical : wires_[b].classical;
                WireId ctrl = aw ? b : a;
                cadd(scale, ctrl, c, rng);
                return;
            }
            throw UnsupportedGate("stabilizer", "TOFF");
        }
        // statevector path: merge all three and apply directly
        thaw(a);
        thaw(b);
        thaw(c);
        std::uint32_t target = wires_[a].block;
        target = merge_blocks_for(target, wires_[b].block);
        target = merge_blocks_for(target, wires_[c].block);
        Block& tb = block(target);
        b_sv_toffoli(tb, a, b, c);
    }

    void apply_pauli(WireId w, Fe xc, Fe zc, CounterRng& rng) {
        if (zc) z(w, zc, rng);
        if (xc) x(w, xc, rng);
    }

    Fe measure(WireId w, CounterRng& rng) {
        WireInfo& info = wires_.at(w);
        require_alive(w);
        if (kind_ == BackendKind::Share || info.block == kNoBlock) return *classical_value(w);
        Block& b = block(info.block);
        Fe outcome = 0;
        std::size_t col = column_of(b, w);
        if (kind_ == BackendKind::Stabilizer) {
            outcome = b.tab->measure(std::uint32_t(col), rng);
        } else {
            outcome = b.sv->measure(std::uint32_t(col), rng);
        }
        freeze_classical(w, outcome);
        return outcome;
    }

    void discard(WireId w, CounterRng& rng) {
        if (!wires_.at(w).alive) return;
        if (kind_ != BackendKind::Share && wires_[w].block != kNoBlock) measure(w, rng);
        wires_[w].alive = false;
    }

    // Classical value of a wire that is no longer in superposition (always
    // available on the share backend).
    std::optional<Fe> classical_value(WireId w) const {
        const WireInfo& info = wires_.at(w);
        if (kind_ == BackendKind::Share || info.block == kNoBlock) return info.classical;
        return std::nullopt;
    }

    // --- state inspection (tests and verdict checks) -------------------------

    // True iff measuring the wire would deterministically give `value`
    // (i.e. the wire is exactly the basis state |value>).
    bool wire_is_basis_state(WireId w, Fe value) {
        const WireInfo& info = wires_.at(w);
        if (kind_ == BackendKind::Share || info.block == kNoBlock)
            return *classical_value(w) == value;
        Block& b = block(info.block);
        std::size_t col = column_of(b, w);
        if (kind_ == BackendKind::Stabilizer) {
            PauliOp e(p_, b.wires.size());
            e.z[col] = 1;
            e.phase = fp::neg(p_, value);
            return b.tab->contains(e);
        }
        auto probs = b.sv->outcome_probs(std::uint32_t(col));
        return probs[value] > 1.0 - kAmpTol;
    }

    // True iff the wire is exactly the single-qupit stabilizer state fixed by
    // w^{-phase} X^xc Z^zc (e.g. F|0> is fixed by X).
    bool wire_has_stabilizer(WireId w, Fe xc, Fe zc, Fe phase) {
        const WireInfo& info = wires_.at(w);
        if (kind_ == BackendKind::Share || info.block == kNoBlock) {
            if (xc != 0) return false;
            return fp::add(p_, fp::mul(p_, zc, *classical_value(w)), phase) == 0;
        }
        Block& b = block(info.block);
        std::size_t col = column_of(b, w);
        if (kind_ == BackendKind::Stabilizer) {
            PauliOp e(p_, b.wires.size());
            e.x[col] = xc;
            e.z[col] = zc;
            e.phase = phase;
            return b.tab->contains(e);
        }
        StateVector probe = *b.sv;
        PauliOp e(p_, b.sv->num_qupits());
        e.x[col] = xc;
        e.z[col] = zc;
        e.phase = phase;
        probe.apply_pauli(e);
        return fidelity(probe, *b.sv) > 1.0 - kAmpTol &&
               std::abs(inner_product(probe, *b.sv) - cplx(1, 0)) < 1e-6;
    }

    // Merge the blocks of all listed wires; kNoBlock when all are classical.
    std::uint32_t merge_wires(const std::vector<WireId>& ws) {
        if (kind_ == BackendKind::Share) return kNoBlock;
        bool any_quantum = false;
        for (WireId w : ws) any_quantum |= wires_.at(w).block != kNoBlock;
        if (!any_quantum) return kNoBlock;
        for (WireId w : ws) thaw(w);
        std::uint32_t target = wires_.at(ws[0]).block;
        for (WireId w : ws) target = merge_blocks_for(target, wires_.at(w).block);
        return target;
    }

    // Measure the joint Pauli observable X^x Z^z over the listed wires.
    Fe measure_pauli_wires(const std::vector<WireId>& ws, const FeVec& xv, const FeVec& zv,
                           CounterRng& rng) {
        if (kind_ != BackendKind::Stabilizer)
            throw Error("joint observable measurement is a stabilizer-backend operation");
        std::uint32_t bid = merge_wires(ws);
        if (bid == kNoBlock) {
            // all classical: the Z-type functional reads right off the values
            Fe acc = 0;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                if (xv[i] % p_ != 0)
                    throw Error("X-type observable on classical wires");
                acc = fp::add(p_, acc, fp::mul(p_, zv[i] % p_, *classical_value(ws[i])));
            }
            return acc;
        }
        Block& b = block(bid);
        PauliOp obs(p_, b.wires.size());
        for (std::size_t i = 0; i < ws.size(); ++i) {
            std::size_t col = column_of(b, ws[i]);
            obs.x[col] = xv[i] % p_;
            obs.z[col] = zv[i] % p_;
        }
        return b.tab->measure_pauli(obs, &rng, 0);
    }

    // Stabilizer-group membership of a joint Pauli across several live wires.
    bool wires_have_stabilizer(const std::vector<WireId>& ws, const PauliOp& e,
                               CounterRng& rng) {
        if (kind_ == BackendKind::Share) {
            Fe acc = e.phase;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                if (e.x[i] != 0) return false;
                acc = fp::add(p_, acc, fp::mul(p_, e.z[i], *classical_value(ws[i])));
            }
            return acc == 0;
        }
        (void)rng;
        std::uint32_t bid = merge_wires(ws);
        if (bid == kNoBlock) {
            // all wires classical
            Fe acc = e.phase;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                if (e.x[i] != 0) return false;
                acc = fp::add(p_, acc, fp::mul(p_, e.z[i], *classical_value(ws[i])));
            }
            return acc == 0;
        }
        Block& b = block(bid);
        PauliOp full(p_, b.wires.size());
        full.phase = e.phase;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            std::size_t col = column_of(b, ws[i]);
            full.x[col] = e.x[i];
            full.z[col] = e.z[i];
        }
        if (kind_ == BackendKind::Stabilizer) return b.tab->contains(full);
        StateVector probe = *b.sv;
        probe.apply_pauli(full);
        return std::abs(inner_product(probe, *b.sv) - cplx(1, 0)) < 1e-6;
    }

    // Dense statevector over the given wires, in the given order (statevector
    // mode, or stabilizer mode within expansion limits).
    StateVector snapshot(const std::vector<WireId>& ws, CounterRng& rng) {
        std::uint32_t bid = merge_wires(ws);
        StateVector full(p_, 0);
        std::vector<WireId> layout;
        if (bid == kNoBlock) {
            FeVec digits;
            for (WireId w : ws) digits.push_back(*classical_value(w));
            return StateVector::basis_state(p_, digits);
        }
        Block& b = block(bid);
        layout = b.wires;
        if (kind_ == BackendKind::Stabilizer)
            full = b.tab->to_statevector();
        else
            full = *b.sv;
        // trace out nothing; reorder requested wires to the front, then
        // verify the rest are classical and drop them by collapsing
        StateVector cur = std::move(full);
        // permutation: build index map wire -> column
        std::vector<std::uint32_t> cols;
        for (WireId w : ws) cols.push_back(std::uint32_t(column_of(b, w)));
        // move requested columns to 0..k-1 by a sequence of swaps
        std::vector<std::uint32_t> order(layout.size());
        for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        for (std::uint32_t i = 0; i < cols.size(); ++i) {
            // find current position of cols[i]
            std::uint32_t pos = 0;
            for (std::uint32_t j = 0; j < order.size(); ++j)
                if (order[j] == cols[i]) pos = j;
            if (pos != i) {
                cur.apply_swap(i, pos);
                std::swap(order[i], order[pos]);
            }
        }
        // measure trailing wires; they must be separable for a faithful
        // snapshot, which holds for the protocol states we snapshot
        StateVector out = cur;
        for (std::uint32_t j = std::uint32_t(cols.size()); j < order.size(); ++j)
            out.measure(j, rng);
        // rebuild the reduced vector on the first k wires
        std::uint64_t kd = 1;
        for (std::size_t i = 0; i < cols.size(); ++i) kd *= p_;
        StateVector red(p_, std::uint32_t(cols.size()));
        for (auto& a : red.amps()) a = 0;
        for (std::uint64_t idx = 0; idx < out.dim(); ++idx)
            if (std::abs(out.amps()[idx]) > 1e-12) red.amps()[idx % kd] += out.amps()[idx];
        red.normalize();
        return red;
    }

    // --- internals ----------------------------------------------------------

    static constexpr std::uint32_t kNoBlock = 0xffffffffu;

    struct Block {
        std::vector<WireId> wires;
        std::unique_ptr<StabilizerTableau> tab;
        std::unique_ptr<StateVector> sv;
    };

    std::size_t block_size_of(WireId w) const {
        const WireInfo& i = wires_.at(w);
        if (i.block == kNoBlock) return 0;
        return blocks_.at(i.block).wires.size();
    }

    std::size_t live_quantum_wires() const {
        std::size_t c = 0;
        for (const auto& w : wires_) c += (w.alive && w.block != kNoBlock);
        return c;
    }

  private:
    struct WireInfo {
        std::uint32_t block = kNoBlock;
        std::uint32_t owner = kOwnerProtocol;
        Fe classical = 0;
        bool alive = false;
    };

    Block& block(std::uint32_t id) { return blocks_.at(id); }

    std::uint32_t new_block(std::vector<WireId> ws) {
        std::uint32_t id = next_block_++;
        Block b;
        b.wires = std::move(ws);
        if (kind_ == BackendKind::Stabilizer)
            b.tab = std::make_unique<StabilizerTableau>(p_, std::uint32_t(b.wires.size()));
        else
            b.sv = std::make_unique<StateVector>(p_, std::uint32_t(b.wires.size()));
        for (std::size_t i = 0; i < b.wires.size(); ++i) wires_[b.wires[i]].block = id;
        blocks_[id] = std::move(b);
        return id;
    }

    std::size_t column_of(const Block& b, WireId w) const {
        for (std::size_t i = 0; i < b.wires.size(); ++i)
            if (b.wires[i] == w) return i;
        throw ContractViolation("wire not in its block");
    }

    void require_alive(WireId w) const {
        if (!wires_.at(w).alive) throw ContractViolation("operation on a discarded wire");
    }

    void fourier_impl(WireId w, Fe r, bool inverse, CounterRng& rng) {
        require_alive(w);
        if (kind_ == BackendKind::Share)
            throw UnsupportedGate("share", inverse ? "FOURINV" : "FOUR");
        thaw(w);
        Block& b = block(wires_[w].block);
        std::uint32_t col = std::uint32_t(column_of(b, w));
        if (kind_ == BackendKind::Stabilizer) b.tab->apply_fourier(col, r, inverse);
        else b.sv->apply_fourier(col, r % p_, inverse);
        (void)rng;
    }

    Block& same_block(WireId a, WireId b, CounterRng& rng) {
        (void)rng;
        thaw(a);
        thaw(b);
        std::uint32_t target = wires_[a].block;
        if (wires_[b].block != target) target = merge_blocks(target, wires_[b].block);
        return block(target);
    }

    std::uint32_t merge_blocks_for(std::uint32_t a, std::uint32_t b) {
        return a == b ? a : merge_blocks(a, b);
    }

    void b_sv_toffoli(Block& blk, WireId a, WireId b, WireId c) {
        blk.sv->apply_toffoli(std::uint32_t(column_of(blk, a)),
                              std::uint32_t(column_of(blk, b)),
                              std::uint32_t(column_of(blk, c)));
    }

    // Rematerialize a frozen classical wire as a quantum wire (basis state).
    void thaw(WireId w) {
        WireInfo& info = wires_.at(w);
        if (info.block != kNoBlock) return;
        std::uint32_t id = new_block({w});
        Block& b = block(id);
        Fe v = info.classical;
        if (v != 0) {
            if (kind_ == BackendKind::Stabilizer)
                b.tab->apply_x(0, v);
            else
                b.sv->apply_x(0, v);
        }
    }

    std::uint32_t merge_blocks(std::uint32_t a, std::uint32_t b) {
        Block& ba = block(a);
        Block& bb = block(b);
        std::size_t na = ba.wires.size(), nb = bb.wires.size();
        if (kind_ == BackendKind::Stabilizer) {
            auto merged = std::make_unique<StabilizerTableau>(p_, std::uint32_t(na + nb));
            // block-diagonal embedding of both generator/destabilizer sets
            auto embed = [&](const StabilizerTableau& src, std::size_t offset,
                             std::size_t count) {
                for (std::size_t i = 0; i < count; ++i) {
                    PauliOp s(p_, na + nb), d(p_, na + nb);
                    PauliOp ss = src.row_pauli(i);
                    PauliOp dd = src.destab_pauli(i);
                    for (std::size_t w = 0; w < count; ++w) {
                        s.x[offset + w] = ss.x[w];
                        s.z[offset + w] = ss.z[w];
                        d.x[offset + w] = dd.x[w];
                        d.z[offset + w] = dd.z[w];
                    }
                    s.phase = ss.phase;
                    merged->install_pair(offset + i, s, d);
                }
            };
            embed(*ba.tab, 0, na);
            embed(*bb.tab, na, nb);
            ba.tab = std::move(merged);
        } else {
            std::uint64_t dim = std::uint64_t(ba.sv->dim()) * bb.sv->dim();
            if (dim > (1ull << 24)) throw Error("statevector block merge exceeds 2^24");
            auto merged = std::make_unique<StateVector>(p_, std::uint32_t(na + nb));
            auto& amps = merged->amps();
            for (auto& ampv : amps) ampv = 0;
            for (std::uint64_t i = 0; i < ba.sv->dim(); ++i)
                for (std::uint64_t j = 0; j < bb.sv->dim(); ++j)
                    amps[i + ba.sv->dim() * j] = ba.sv->amps()[i] * bb.sv->amps()[j];
            ba.sv = std::move(merged);
        }
        for (WireId w : bb.wires) wires_[w].block = a;
        ba.wires.insert(ba.wires.end(), bb.wires.begin(), bb.wires.end());
        blocks_.erase(b);
        return a;
    }

    // After a measurement the wire is a definite basis state; remove it from
    // its block so blocks shrink back down.
    void freeze_classical(WireId w, Fe value) {
        WireInfo& info = wires_.at(w);
        Block& b = block(info.block);
        std::size_t col = column_of(b, w);
        if (kind_ == BackendKind::Stabilizer) {
            b.tab->remove_classical_wire(std::uint32_t(col), value);
            drop_block_wire(info.block, col);
        } else {
            // statevector: factor out the collapsed digit
            StateVector& sv = *b.sv;
            std::uint64_t st = sv.stride_of(std::uint32_t(col));
            StateVector red(p_, std::uint32_t(b.wires.size() - 1));
            auto& ramps = red.amps();
            for (auto& ampv : ramps) ampv = 0;
            for (std::uint64_t i = 0; i < sv.dim(); ++i) {
                if (i / st % p_ != value) continue;
                Fe hi_units = Fe(i / (st * p_));
                std::uint64_t rest = i % st + std::uint64_t(hi_units) * st;
                ramps[rest] = sv.amps()[i];
            }
            shrink_block_sv(info.block, col, std::move(red));
        }
        info.classical = value;
        info.block = kNoBlock;
    }

    // Remove a wire from the block bookkeeping after its backend column has
    // already been dropped.
    void drop_block_wire(std::uint32_t id, std::size_t col) {
        Block& b = block(id);
        WireId dropped = b.wires[col];
        b.wires.erase(b.wires.begin() + std::ptrdiff_t(col));
        wires_[dropped].block = kNoBlock;
        if (b.wires.empty()) blocks_.erase(id);
    }

    void shrink_block_sv(std::uint32_t id, std::size_t col, StateVector red) {
        Block& b = block(id);
        WireId dropped = b.wires[col];
        std::vector<WireId> new_wires;
        for (std::size_t i = 0; i < b.wires.size(); ++i)
            if (i != col) new_wires.push_back(b.wires[i]);
        if (new_wires.empty()) {
            wires_[dropped].block = kNoBlock;
            blocks_.erase(id);
            return;
        }
        red.normalize();
        b.sv = std::make_unique<StateVector>(std::move(red));
        b.wires = std::move(new_wires);
        for (std::size_t i = 0; i < b.wires.size(); ++i) wires_[b.wires[i]].block = id;
        wires_[dropped].block = kNoBlock;
    }

    BackendKind kind_;
    std::uint32_t p_;
    std::vector<WireInfo> wires_;
    std::map<std::uint32_t, Block> blocks_;
    std::uint32_t next_block_ = 0;
};

}  // namespace qss

#endif
