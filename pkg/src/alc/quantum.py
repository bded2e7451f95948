"""Qubit ALC: the singlet-based perfect protocol and a seesaw over product encodings.

Complex matrices are plain ``numpy`` arrays (``complex128``).  Tolerances
are absolute.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

TOL = 1e-12
PSD_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA = (
    I2,
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
PSI_MINUS = (np.kron(KET0, KET1) - np.kron(KET1, KET0)) / np.sqrt(2)


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """``|<u|v>|^2`` for normalised kets; insensitive to global phase."""
    return float(abs(np.vdot(u, v)) ** 2)


def is_density_matrix(rho: np.ndarray, tol: float = PSD_TOL) -> bool:
    if not np.allclose(rho, rho.conj().T, atol=tol):
        return False
    if abs(np.trace(rho) - 1) > tol:
        return False
    return bool(np.linalg.eigvalsh(rho).min() >= -tol)


def is_two_outcome_measurement(m_eq: np.ndarray, m_neq: np.ndarray) -> bool:
    dim = m_eq.shape[0]
    for m in (m_eq, m_neq):
        if not np.allclose(m, m.conj().T, atol=PSD_TOL):
            return False
        if np.linalg.eigvalsh(m).min() < -PSD_TOL:
            return False
    return bool(np.allclose(m_eq + m_neq, np.eye(dim), atol=TOL))


# --- entangled protocol ---------------------------------------------------


@dataclass
class QuantumProtocolResult:
    per_pair: dict[tuple[int, int], float]
    overall: float

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "per_pair": {f"{k}{kp}": v for (k, kp), v in sorted(self.per_pair.items())},
        }


def encoded_state(k: int, kp: int) -> np.ndarray:
    return np.kron(SIGMA[k], SIGMA[kp]) @ PSI_MINUS


def bell_protocol() -> QuantumProtocolResult:
    """String ``x`` maps to ``k``; each party applies ``sigma_k`` to its half of the
    singlet; Charlie measures ``{|psi-><psi-|, I - |psi-><psi-|}`` and says
    "equal" on the first outcome."""
    m_eq = projector(PSI_MINUS)
    m_neq = np.eye(4) - m_eq
    per_pair = {}
    for k in range(4):
        for kp in range(4):
            psi = encoded_state(k, kp)
            m = m_eq if k == kp else m_neq
            per_pair[(k, kp)] = float(np.real(np.vdot(psi, m @ psi)))
    return QuantumProtocolResult(per_pair, sum(per_pair.values()) / 16)


def bell_overlaps() -> np.ndarray:
    """16 x 16 fidelities between the encoded states."""
    states = [encoded_state(k, kp) for k in range(4) for kp in range(4)]
    return np.array([[fidelity(a, b) for b in states] for a in states])


# --- product encodings ----------------------------------------------------

_SIGNS = np.where(np.eye(4, dtype=bool), 1.0, -1.0)


def _pair_kets(alice, bob) -> np.ndarray:
    """``out[x, y] = |a_x> (x) |b_y>`` as length-4 kets."""
    return np.einsum("xa,yb->xyab", alice, bob).reshape(4, 4, 4)


def product_success(alice: np.ndarray, bob: np.ndarray, m_eq: np.ndarray) -> float:
    """Average success with kets ``alice[x]``, ``bob[y]`` and decoder ``{m_eq, I - m_eq}``."""
    psi = _pair_kets(np.asarray(alice), np.asarray(bob))
    p_eq = np.real(np.einsum("xyi,ij,xyj->xy", psi.conj(), m_eq, psi))
    return float((np.trace(p_eq) + (12 - (p_eq.sum() - np.trace(p_eq)))) / 16)


def _score_operator(alice, bob) -> np.ndarray:
    psi = _pair_kets(alice, bob)
    return np.einsum("xy,xyi,xyj->ij", _SIGNS, psi, psi.conj())


def optimal_decoder(alice, bob) -> np.ndarray:
    """Projector onto the positive eigenspace of ``sum_{x=y} rho - sum_{x!=y} rho``."""
    vals, vecs = np.linalg.eigh(_score_operator(alice, bob))
    keep = vecs[:, vals > 0]
    return keep @ keep.conj().T


def _top_eigvec(h: np.ndarray) -> np.ndarray:
    _, vecs = np.linalg.eigh(h)
    return vecs[:, -1]


def _update_alice(bob, m_eq) -> np.ndarray:
    m = m_eq.reshape(2, 2, 2, 2)  # indices a, b, a', b'
    out = []
    for x in range(4):
        k = np.zeros((2, 2), dtype=complex)
        for y in range(4):
            # <b_y| M |b_y> as an operator on Alice's qubit
            k += _SIGNS[x, y] * np.einsum("b,abcd,d->ac", bob[y].conj(), m, bob[y])
        out.append(_top_eigvec((k + k.conj().T) / 2))
    return np.array(out)


def _update_bob(alice, m_eq) -> np.ndarray:
    m = m_eq.reshape(2, 2, 2, 2)
    out = []
    for y in range(4):
        k = np.zeros((2, 2), dtype=complex)
        for x in range(4):
            k += _SIGNS[x, y] * np.einsum("a,abcd,c->bd", alice[x].conj(), m, alice[x])
        out.append(_top_eigvec((k + k.conj().T) / 2))
    return np.array(out)


def _random_kets(rng: np.random.Generator, count: int) -> np.ndarray:
    v = rng.normal(size=(count, 2)) + 1j * rng.normal(size=(count, 2))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _random_projector(rng: np.random.Generator) -> np.ndarray:
    h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    vals, vecs = np.linalg.eigh(h + h.conj().T)
    keep = vecs[:, vals > 0]
    return keep @ keep.conj().T


@dataclass
class SeesawRun:
    restart: int
    history: list[float]
    alice: np.ndarray
    bob: np.ndarray
    m_eq: np.ndarray

    @property
    def value(self) -> float:
        return self.history[-1]

    def monotone(self, tol: float = TOL) -> bool:
        return all(b >= a - tol for a, b in zip(self.history, self.history[1:]))


def seesaw_run(seed: int, restart: int, iterations: int) -> SeesawRun:
    """One restart: random kets and decoder, then ``iterations`` rounds of
    (decoder, Alice, Bob) best responses."""
    rng = np.random.default_rng([seed, restart])
    alice, bob = _random_kets(rng, 4), _random_kets(rng, 4)
    m_eq = _random_projector(rng)
    history = [product_success(alice, bob, m_eq)]
    for _ in range(iterations):
        m_eq = optimal_decoder(alice, bob)
        history.append(product_success(alice, bob, m_eq))
        alice = _update_alice(bob, m_eq)
        history.append(product_success(alice, bob, m_eq))
        bob = _update_bob(alice, m_eq)
        history.append(product_success(alice, bob, m_eq))
    return SeesawRun(restart, history, alice, bob, m_eq)


def _run_args(args):
    return seesaw_run(*args)


@dataclass
class SeesawResult:
    seed: int
    restarts: int
    iterations: int
    best_value: float
    best_restart: int
    monotone: bool
    valid_decoders: bool
    values: list[float] = field(repr=False, default_factory=list)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "restarts": self.restarts,
            "iterations": self.iterations,
            "best_value": self.best_value,
            "best_restart": self.best_restart,
            "gap_to_one": 1 - self.best_value,
            "monotone": self.monotone,
            "valid_decoders": self.valid_decoders,
        }


def seesaw(seed: int = 0, restarts: int = 50, iterations: int = 100, jobs: int = 1) -> SeesawResult:
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if iterations < 0:
        raise ValueError("iterations must be nonnegative")
    args = [(seed, r, iterations) for r in range(restarts)]
    if jobs > 1 and restarts > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(_run_args, args))
    else:
        runs = [seesaw_run(*a) for a in args]
    best: Optional[SeesawRun] = None
    for run in runs:  # restart order, so ties go to the lowest index
        if best is None or run.value > best.value:
            best = run
    eye = np.eye(4)
    return SeesawResult(
        seed, restarts, iterations, best.value, best.restart,
        all(r.monotone() for r in runs),
        all(is_two_outcome_measurement(r.m_eq, eye - r.m_eq) for r in runs),
        [r.value for r in runs],
    )


def product_strategy_search(seed: int, restarts: int, iterations: int) -> float:
    """Best average success found by the seesaw over product encodings."""
    return seesaw(seed, restarts, iterations).best_value


def classical_embedding_value() -> float:
    """00 -> |0>, others -> |1> on both sides; Charlie says "equal" only on |00>."""
    alice = np.array([KET0, KET1, KET1, KET1])
    m_eq = projector(np.kron(KET0, KET0))
    return product_success(alice, alice.copy(), m_eq)


def quantum_report(seed: int = 0, restarts: int = 50, iterations: int = 100, jobs: int = 1,
                   run_seesaw: bool = True) -> dict:
    bell = bell_protocol()
    overlaps = bell_overlaps()
    report = {
        "bell_protocol": bell.to_dict(),
        "bell_success_is_one": abs(bell.overall - 1) <= TOL,
        "overlaps_are_binary": bool(np.all((np.abs(overlaps) <= TOL) | (np.abs(overlaps - 1) <= TOL))),
        "classical_embedding": classical_embedding_value(),
    }
    if run_seesaw:
        report["seesaw"] = seesaw(seed, restarts, iterations, jobs).to_dict()
    return report
