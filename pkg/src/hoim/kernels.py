"""Compiled inner loops for the annealed solvers.

Each kernel advances the run by one chunk of iterations, consuming
pre-drawn noise and mutating the spin/clause state, the per-spin input
sums and the best-so-far tracking in place.  The chunking keeps
random-number generation on the numpy PCG64 stream (bit-reproducible per
seed) and lets the log of the exponential noise be vectorized outside the
kernel: ``lnoise`` already holds ``log(u/B + eps)`` (or the
pseudocode-form ``log(B*u + eps)``), so the per-spin threshold is a single
multiply by the step temperature.
"""

from __future__ import annotations

import numpy as np
from numba import njit

INT16_MIN = -32768.0
INT16_MAX = 32767.0


@njit(cache=True, inline="always")
def _dequantized(value, scale):
    q = np.rint(value / scale)
    if q < INT16_MIN:
        q = INT16_MIN
    elif q > INT16_MAX:
        q = INT16_MAX
    return q * scale


@njit(cache=True, inline="always")
def _threshold(tau, lnoise, pseudo, quant, qscale):
    # Value compared against S_i: fire iff S_i < thr.
    if pseudo:
        thr = tau * lnoise
        if quant:
            thr = _dequantized(thr, qscale)
        return thr
    mu = tau * lnoise
    if quant:
        mu = _dequantized(mu, qscale)
    return -mu


@njit(cache=True, inline="always")
def _flip_spin(v, term_ptr, term_cols, spin_ptr, spin_rows, weights,
               spins, outputs, s_in):
    # Energy change 2*S_v, then negate the outputs of every clause of v and
    # propagate the output changes into the input sums of their members.
    de = 2.0 * s_in[v]
    for p in range(spin_ptr[v], spin_ptr[v + 1]):
        k = spin_rows[p]
        outputs[k] = -outputs[k]
        w2 = 2.0 * weights[k] * outputs[k]
        for q in range(term_ptr[k], term_ptr[k + 1]):
            s_in[term_cols[q]] += w2
    spins[v] = -spins[v]
    return de


@njit(cache=True)
def run_uncolored_chunk(term_ptr, term_cols, spin_ptr, spin_rows, weights,
                        spins, outputs, s_in, best_spins,
                        energy, best_energy, best_step,
                        step0, nsteps, lnoise, upick,
                        tau0, cap_c, delta,
                        pseudo, quant, qscale,
                        use_target, target,
                        trace_every, trace_steps, trace_vals,
                        record_events, ev_steps, ev_spins,
                        active_buf):
    n = s_in.shape[0]
    n_ev = 0
    n_tr = 0
    for srel in range(nsteps):
        step = step0 + srel
        tau = tau0 / np.log1p((1.0 + step * delta) / cap_c)
        cnt = 0
        for i in range(n):
            thr = _threshold(tau, lnoise[srel, i], pseudo, quant, qscale)
            if s_in[i] < thr:
                active_buf[cnt] = i
                cnt += 1
        if cnt > 0:
            pick = int(upick[srel] * cnt)
            if pick >= cnt:
                pick = cnt - 1
            v = active_buf[pick]
            energy += _flip_spin(v, term_ptr, term_cols, spin_ptr, spin_rows,
                                 weights, spins, outputs, s_in)
            if record_events:
                ev_steps[n_ev] = step
                ev_spins[n_ev] = v
                n_ev += 1
            if energy < best_energy:
                best_energy = energy
                best_step = step + 1
                for i in range(n):
                    best_spins[i] = spins[i]
        if trace_every > 0 and (step + 1) % trace_every == 0:
            trace_steps[n_tr] = step + 1
            trace_vals[n_tr] = energy
            n_tr += 1
        if use_target and best_energy <= target:
            return srel + 1, energy, best_energy, best_step, True, n_ev, n_tr
    return nsteps, energy, best_energy, best_step, False, n_ev, n_tr


@njit(cache=True)
def run_colored_chunk(term_ptr, term_cols, spin_ptr, spin_rows, weights,
                      group_ptr, group_members,
                      spins, outputs, s_in, best_spins,
                      energy, best_energy, best_step,
                      step0, group0, nsteps, lnoise,
                      tau0, cap_c, delta,
                      pseudo, quant, qscale,
                      use_target, target,
                      trace_every, trace_steps, trace_vals,
                      record_events, ev_steps, ev_spins,
                      fired_buf):
    n_groups = group_ptr.shape[0] - 1
    n = s_in.shape[0]
    n_ev = 0
    n_tr = 0
    r = group0
    for srel in range(nsteps):
        step = step0 + srel
        tau = tau0 / np.log1p((1.0 + step * delta) / cap_c)
        lo = group_ptr[r]
        hi = group_ptr[r + 1]
        cnt = 0
        for jj in range(hi - lo):
            i = group_members[lo + jj]
            thr = _threshold(tau, lnoise[srel, jj], pseudo, quant, qscale)
            if s_in[i] < thr:
                fired_buf[cnt] = i
                cnt += 1
        if cnt > 0:
            # Same-color spins share no clause, so sequential application
            # below is order-independent and equals the simultaneous update.
            for f in range(cnt):
                v = fired_buf[f]
                energy += _flip_spin(v, term_ptr, term_cols, spin_ptr,
                                     spin_rows, weights, spins, outputs, s_in)
                if record_events:
                    ev_steps[n_ev] = step
                    ev_spins[n_ev] = v
                    n_ev += 1
            if energy < best_energy:
                best_energy = energy
                best_step = step + 1
                for i in range(n):
                    best_spins[i] = spins[i]
        r += 1
        if r == n_groups:
            r = 0
        if trace_every > 0 and (step + 1) % trace_every == 0:
            trace_steps[n_tr] = step + 1
            trace_vals[n_tr] = energy
            n_tr += 1
        if use_target and best_energy <= target:
            return srel + 1, energy, best_energy, best_step, True, n_ev, n_tr, r
    return nsteps, energy, best_energy, best_step, False, n_ev, n_tr, r


@njit(cache=True)
def run_async_chunk(term_ptr, term_cols, spin_ptr, spin_rows, weights,
                    spins, outputs, s_in, best_spins,
                    energy, best_energy, best_step,
                    step0, nsteps, lnoise, ubern,
                    tau0, cap_c, delta,
                    quant, qscale, eta, amplitude,
                    use_target, target,
                    trace_every, trace_steps, trace_vals,
                    record_events, ev_steps, ev_spins,
                    fired_buf, clause_parity, touched_buf):
    n = s_in.shape[0]
    n_ev = 0
    n_tr = 0
    block_p = 1.0 - eta
    for srel in range(nsteps):
        step = step0 + srel
        tau = tau0 / np.log1p((1.0 + step * delta) / cap_c)
        mu_exp = tau * lnoise[srel]
        if quant:
            mu_exp = _dequantized(mu_exp, qscale)
        cnt = 0
        for i in range(n):
            mu = mu_exp
            if ubern[srel, i] < block_p:
                mu += amplitude  # blocked this step
            if s_in[i] < -mu:
                fired_buf[cnt] = i
                cnt += 1
        if cnt > 0:
            ntouched = 0
            for f in range(cnt):
                v = fired_buf[f]
                spins[v] = -spins[v]
                for p in range(spin_ptr[v], spin_ptr[v + 1]):
                    k = spin_rows[p]
                    if clause_parity[k] == 0:
                        touched_buf[ntouched] = k
                        ntouched += 1
                    clause_parity[k] += 1
                if record_events:
                    ev_steps[n_ev] = step
                    ev_spins[n_ev] = v
                    n_ev += 1
            for tt in range(ntouched):
                k = touched_buf[tt]
                if clause_parity[k] % 2 == 1:
                    energy += 2.0 * weights[k] * outputs[k]
                    outputs[k] = -outputs[k]
                    w2 = 2.0 * weights[k] * outputs[k]
                    for q in range(term_ptr[k], term_ptr[k + 1]):
                        s_in[term_cols[q]] += w2
                clause_parity[k] = 0
            if energy < best_energy:
                best_energy = energy
                best_step = step + 1
                for i in range(n):
                    best_spins[i] = spins[i]
        if trace_every > 0 and (step + 1) % trace_every == 0:
            trace_steps[n_tr] = step + 1
            trace_vals[n_tr] = energy
            n_tr += 1
        if use_target and best_energy <= target:
            return srel + 1, energy, best_energy, best_step, True, n_ev, n_tr
    return nsteps, energy, best_energy, best_step, False, n_ev, n_tr
