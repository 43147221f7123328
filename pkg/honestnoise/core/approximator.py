"""
Honest approximation of a channel by a mixture of unitaries

Minimize ||L_A - L||_dia over mixtures L_A(rho) = sum_i p_i U_i rho U_i^dagger
subject to the honesty certificate A >= B. The feasible set is not convex in
p, so the search is a seeded multi-start Nelder-Mead over the non-identity
weights, projected onto the probability simplex, with an exact penalty on
the negative part of min-eig(A - B). Each restart finishes with a bisection
along the ray towards the identity mixture, where A scales as tau^2 and the
boundary min-eig(A - B) = 0 is located on the feasible side.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from honestnoise.core.channels import (
    ChiMatrix,
    QuantumChannel,
    bloch_map,
    kraus_to_choi,
    kraus_to_chi,
    pauli_basis,
    pauli_labels,
    pauli_matrix,
)
from honestnoise.core.diamond import SdpSolution, SdpStatus, diamond_distance_from_choi
from honestnoise.core.errors import (
    BadProbabilityError,
    DimensionMismatchError,
    InfeasibleError,
    InvalidMixingSetError,
    SolverFailureError,
    UnknownPresetError,
)
from honestnoise.core.honesty import (
    EmpiricalReport,
    HonestyCertificate,
    build_A,
    certify,
    empirical_honesty_check,
    honesty_bound,
)
from honestnoise.core.linalg import UNITARY_TOL, frozen, is_unitary
from honestnoise.core.zoo import HADAMARD, axis_operator
from honestnoise.models.schemas import OptimizerOptions

logger = logging.getLogger(__name__)

PROB_SUM_TOL = 1e-12
IDENTITY_TOL = 1e-13
Z90 = (np.eye(2) - 1j * pauli_matrix("Z")) / math.sqrt(2)

MIXING_SET_NAMES = ("pauli", "pauli+H", "pauli+Z90")


@dataclass(frozen=True, eq=False)
class MixtureChannel:
    """Channel rho -> sum_i p_i U_i rho U_i^dagger over a labelled unitary set"""

    ops: Tuple[np.ndarray, ...]
    probs: np.ndarray
    labels: Tuple[str, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(u, dtype=complex) for u in self.ops)
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        if len(ops) != probs.size or len(self.labels) != probs.size:
            raise DimensionMismatchError("mixture needs one probability and one label per unitary")
        for label, u in zip(self.labels, ops):
            if not is_unitary(u, UNITARY_TOL):
                raise InvalidMixingSetError(f"mixing element {label!r} is not unitary")
        if np.any(probs < -PROB_SUM_TOL) or abs(probs.sum() - 1) > PROB_SUM_TOL:
            raise BadProbabilityError(f"mixture probabilities must be nonnegative and sum to 1, got {probs}")
        probs = np.clip(probs, 0.0, None)
        probs.setflags(write=False)
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n_qubits(self) -> int:
        return int(round(math.log2(self.ops[0].shape[0])))

    def to_channel(self) -> QuantumChannel:
        return QuantumChannel(tuple(math.sqrt(p) * u for p, u in zip(self.probs, self.ops) if p > 0))

    def chi(self) -> ChiMatrix:
        coeffs = _pauli_coefficients(self.ops)
        return ChiMatrix(self.n_qubits, np.einsum("i,im,in->mn", self.probs, coeffs, coeffs.conj()))

    def chi_diag(self) -> np.ndarray:
        return self.chi().diagonal()

    def bloch_matrix(self) -> np.ndarray:
        return bloch_map(self.to_channel()).m

    def weights(self) -> Dict[str, float]:
        return {label: float(p) for label, p in zip(self.labels, self.probs)}


@dataclass(frozen=True, eq=False)
class MixingSet:
    """Named list of unitaries available to an approximation"""

    name: str
    labels: Tuple[str, ...]
    ops: Tuple[np.ndarray, ...]

    @property
    def n_qubits(self) -> int:
        return int(round(math.log2(self.ops[0].shape[0])))

    @property
    def identity_index(self) -> int:
        return _identity_index(self.ops)

    @property
    def is_pauli_group(self) -> bool:
        return self.labels == pauli_labels(self.n_qubits)

    def mixture(self, probs: Sequence[float]) -> MixtureChannel:
        return MixtureChannel(self.ops, np.asarray(probs, dtype=float), self.labels)


@dataclass(frozen=True)
class OptimizerTrace:
    restarts: int
    iterations: Tuple[int, ...]
    best_per_restart: Tuple[Optional[float], ...]
    bisection_steps: int
    failed_restarts: int = 0


@dataclass(frozen=True, eq=False)
class ApproximationResult:
    mixture: MixtureChannel
    chi_diag: np.ndarray
    diamond_dist: float
    certificate: HonestyCertificate
    solution: SdpSolution
    trace: OptimizerTrace
    empirical: Optional[EmpiricalReport] = None


def _pauli_coefficients(ops: Sequence[np.ndarray]) -> np.ndarray:
    n = int(round(math.log2(ops[0].shape[0])))
    basis = pauli_basis(n)
    return np.einsum("mab,iba->im", basis, np.stack(ops)) / 2**n


def _identity_index(ops: Sequence[np.ndarray]) -> int:
    d = ops[0].shape[0]
    for i, u in enumerate(ops):
        # identity up to a global phase
        if abs(abs(np.trace(u)) - d) <= 1e-10:
            return i
    raise InvalidMixingSetError("mixing set must contain the identity")


def mixing_set(name: str, n_qubits: int = 1) -> MixingSet:
    """
    Registered mixing sets: n-qubit Paulis, and single-qubit Paulis augmented
    with the Hadamard ("pauli+H") or the quarter turn about z ("pauli+Z90")

    Raises:
        UnknownPresetError: If the name is not registered
        InvalidMixingSetError: If an augmented set is requested for n_qubits > 1
    """
    if name not in MIXING_SET_NAMES:
        raise UnknownPresetError(f"unknown mixing set {name!r}; expected one of {', '.join(MIXING_SET_NAMES)}")
    labels = pauli_labels(n_qubits)
    ops = tuple(pauli_basis(n_qubits))
    if name == "pauli":
        return MixingSet(name, labels, ops)
    if n_qubits != 1:
        raise InvalidMixingSetError(f"mixing set {name!r} is defined for one qubit only")
    extra = HADAMARD if name == "pauli+H" else Z90
    return MixingSet(name, labels + (name.split("+")[1],), ops + (extra,))


def sparse_pauli_set(support: Sequence[str]) -> MixingSet:
    """
    Mixing set restricted to the given Pauli labels

    Raises:
        InvalidMixingSetError: If the identity label is missing or labels mix lengths
    """
    support = tuple(label.upper() for label in support)
    n = len(support[0]) if support else 0
    if n == 0 or any(len(label) != n for label in support):
        raise InvalidMixingSetError("support labels must be nonempty and of equal length")
    if "I" * n not in support:
        raise InvalidMixingSetError(f"support must include {'I' * n}")
    return MixingSet("sparse", support, tuple(pauli_matrix(label) for label in support))


def custom_mixing_set(labels: Sequence[str], unitaries: Sequence[np.ndarray]) -> MixingSet:
    """
    Raises:
        InvalidMixingSetError: On mixed dimensions, non-unitaries or a missing identity
    """
    ops = tuple(np.asarray(u, dtype=complex) for u in unitaries)
    if not ops:
        raise InvalidMixingSetError("mixing set is empty")
    if any(u.shape != ops[0].shape for u in ops):
        raise InvalidMixingSetError("mixing-set unitaries must share one dimension")
    for label, u in zip(labels, ops):
        if not is_unitary(u, UNITARY_TOL):
            raise InvalidMixingSetError(f"mixing element {label!r} is not unitary")
    _identity_index(ops)
    return MixingSet("custom", tuple(labels), ops)


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {p >= 0, sum p = 1}"""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - 1.0
    k = np.arange(1, v.size + 1)
    rho = np.nonzero(u - cumulative / k > 0)[0][-1]
    shift = cumulative[rho] / (rho + 1)
    return np.maximum(v - shift, 0.0)


@lru_cache(maxsize=None)
def _commutation_signs(n_qubits: int) -> np.ndarray:
    """S[i, j] = +1 when Paulis i and j commute, -1 otherwise"""
    basis = pauli_basis(n_qubits)
    k = len(basis)
    signs = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            signs[i, j] = 1.0 if np.allclose(basis[i] @ basis[j], basis[j] @ basis[i]) else -1.0
    return frozen(signs)


def pauli_probs_from_eigenvalues(lambdas: Sequence[float], n_qubits: int = 1) -> np.ndarray:
    """
    Pauli-channel probabilities with the given Pauli eigenvalues

    Args:
        lambdas: Eigenvalues of the non-identity Paulis, in label order

    Returns:
        Probabilities (possibly with negative entries when no Pauli channel
        has these eigenvalues)
    """
    full = np.concatenate([[1.0], np.asarray(lambdas, dtype=float)])
    return _commutation_signs(n_qubits) @ full / 4**n_qubits


def pauli_warm_start(b: np.ndarray, n_qubits: int) -> np.ndarray:
    """
    Feasible Pauli mixture dominating B on the diagonal

    Gershgorin row sums a_i of B give diag(a) >= B; the eigenvalue branch
    lambda_i = 1 - sqrt(a_i) reproduces A = diag(a) for a Pauli mixture.
    """
    a = np.sum(np.abs(b), axis=1)
    lambdas = 1.0 - np.sqrt(np.minimum(a, 4.0))
    return project_to_simplex(pauli_probs_from_eigenvalues(lambdas, n_qubits))


@dataclass(frozen=True, eq=False)
class _Problem:
    """Precomputed data shared by every restart"""

    target_choi: np.ndarray
    op_chois: np.ndarray
    op_blochs: np.ndarray
    b: np.ndarray
    identity_index: int
    n_qubits: int
    penalty: float
    max_iter: int
    bisection_tol: float

    def full_probs(self, x: np.ndarray) -> np.ndarray:
        raw = np.insert(np.asarray(x, dtype=float), self.identity_index, 0.0)
        raw[self.identity_index] = 1.0 - float(np.sum(x))
        return raw

    def reduced(self, probs: np.ndarray) -> np.ndarray:
        return np.delete(np.asarray(probs, dtype=float), self.identity_index)

    def violation(self, probs: np.ndarray) -> float:
        a = build_A(np.einsum("i,iab->ab", probs, self.op_blochs))
        return max(0.0, -float(np.linalg.eigvalsh(a - self.b)[0]))

    def distance(self, probs: np.ndarray) -> float:
        choi = np.einsum("i,iab->ab", probs, self.op_chois) - self.target_choi
        return diamond_distance_from_choi(choi, self.n_qubits).value

    def objective(self, x: np.ndarray) -> float:
        raw = self.full_probs(x)
        probs = project_to_simplex(raw)
        try:
            distance = self.distance(probs)
        except SolverFailureError as e:
            # Nelder-Mead ranks the vertex last and moves on
            logger.debug("objective evaluation failed at %s: %s", np.round(probs, 6), e)
            return math.inf
        return distance + self.penalty * self.violation(probs) + float(np.sum(np.abs(probs - raw)))

    def bisect_to_boundary(self, probs: np.ndarray) -> Tuple[np.ndarray, int]:
        """
        Move along p(tau) = tau p + (1 - tau) e_identity to the honesty boundary

        A(tau) = tau^2 A(1) is monotone, so bisection on tau finds the
        smallest feasible tau; an infeasible start is pushed outwards as far
        as the identity weight allows. Returns the feasible-side point, or
        the input when no feasible point lies on the ray.
        """
        step = np.array(probs, dtype=float)
        step[self.identity_index] -= 1.0

        def at(tau: float) -> np.ndarray:
            p = step * tau
            p[self.identity_index] += 1.0
            return np.clip(p, 0.0, None)

        off_identity = float(np.sum(np.delete(probs, self.identity_index)))
        tau_max = 1.0 / off_identity if off_identity > 0 else 1.0
        if self.violation(at(1.0)) > 0:
            if self.violation(at(tau_max)) > 0:
                return probs, 0
            lo, hi = 1.0, tau_max
        else:
            lo, hi = 0.0, 1.0
        steps = 0
        while hi - lo > self.bisection_tol:
            mid = (lo + hi) / 2
            if self.violation(at(mid)) > 0:
                lo = mid
            else:
                hi = mid
            steps += 1
        boundary = at(hi)
        return boundary / boundary.sum(), steps


@dataclass(frozen=True, eq=False)
class _RestartTask:
    problem: _Problem
    index: int
    start: Tuple[float, ...]
    scale: float


@dataclass(frozen=True, eq=False)
class _RestartOutcome:
    index: int
    probs: Optional[np.ndarray]
    distance: Optional[float]
    iterations: int
    bisection_steps: int
    error: Optional[str] = None


def _run_restart(task: _RestartTask) -> _RestartOutcome:
    """One Nelder-Mead search; a diamond program that fails to converge marks the restart as failed"""
    try:
        return _search(task)
    except SolverFailureError as e:
        logger.warning("restart %d failed: %s", task.index, e)
        return _RestartOutcome(task.index, None, None, 0, 0, error=str(e))


def _search(task: _RestartTask) -> _RestartOutcome:
    problem = task.problem
    x0 = np.asarray(task.start, dtype=float)
    k = x0.size
    if k == 0:
        probs = np.ones(1)
        if problem.violation(probs) > 0:
            return _RestartOutcome(task.index, None, None, 0, 0)
        return _RestartOutcome(task.index, probs, problem.distance(probs), 0, 0)
    step = max(task.scale / max(k, 1), 1e-6)
    simplex = np.vstack([x0] + [x0 + step * np.eye(k)[i] for i in range(k)])
    result = minimize(
        problem.objective,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "maxiter": problem.max_iter,
            "xatol": 1e-8,
            "fatol": 1e-10,
            "adaptive": True,
        },
    )
    searched = project_to_simplex(problem.full_probs(result.x))
    probs, steps = problem.bisect_to_boundary(searched)
    if problem.violation(probs) > 0:
        logger.debug("restart %d ended infeasible", task.index)
        return _RestartOutcome(task.index, None, None, int(result.nit), steps)
    distance = problem.distance(probs)
    if probs is not searched and problem.violation(searched) == 0:
        # an interior optimum can beat its boundary point
        interior = problem.distance(searched)
        if interior < distance:
            probs, distance = searched, interior
    logger.debug("restart %d: %d iterations, diamond %.10f", task.index, result.nit, distance)
    return _RestartOutcome(task.index, probs, distance, int(result.nit), steps)


def _starting_points(problem: _Problem, mset: MixingSet, opts: OptimizerOptions) -> List[Tuple[np.ndarray, float]]:
    k = len(mset.ops) - 1
    scale = max(math.sqrt(max(float(np.linalg.eigvalsh(problem.b)[-1]), 0.0)), 1e-6)
    starts = []
    if mset.is_pauli_group:
        starts.append((problem.reduced(pauli_warm_start(problem.b, mset.n_qubits)), scale))
    for seq in np.random.SeedSequence(opts.seed).spawn(opts.restarts - len(starts)):
        rng = np.random.default_rng(seq)
        weight = scale * rng.uniform(0.2, 2.0)
        starts.append((weight * rng.dirichlet(np.ones(k)), scale))
    return starts


def _merge(outcomes: Sequence[_RestartOutcome], mset: MixingSet, tie_tol: float) -> _RestartOutcome:
    """Minimal distance; ties prefer higher chi_00, then the lexicographically smallest probabilities"""
    feasible = [o for o in outcomes if o.probs is not None]
    failed = [o for o in outcomes if o.error is not None]
    if not feasible and failed:
        raise SolverFailureError(
            f"no restart finished: {len(failed)} failed in the diamond program, first with {failed[0].error}"
        )
    if not feasible:
        raise InfeasibleError(f"no mixture over {', '.join(mset.labels)} satisfies the honesty certificate")
    best = min(o.distance for o in feasible)
    tied = [o for o in feasible if o.distance <= best + tie_tol]
    coeffs = _pauli_coefficients(mset.ops)

    def rank(o: _RestartOutcome):
        chi00 = float(np.sum(o.probs * np.abs(coeffs[:, 0]) ** 2))
        return (-round(chi00, 12), tuple(np.round(o.probs, 12)))

    return min(tied, key=rank)


def _identity_result(ch: QuantumChannel, mset: MixingSet) -> ApproximationResult:
    probs = np.zeros(len(mset.ops))
    probs[mset.identity_index] = 1.0
    mixture = mset.mixture(probs)
    return ApproximationResult(
        mixture=mixture,
        chi_diag=mixture.chi_diag(),
        diamond_dist=0.0,
        certificate=certify(mixture.bloch_matrix(), ch),
        solution=SdpSolution(0.0, 0.0, 0.0, 0, SdpStatus.OPTIMAL),
        trace=OptimizerTrace(0, (), (), 0),
    )


def approximate(ch: QuantumChannel, mset: MixingSet, opts: Optional[OptimizerOptions] = None) -> ApproximationResult:
    """
    Closest honest mixture over a mixing set, in diamond distance

    Args:
        ch: Channel to approximate
        mset: Mixing set, containing the identity
        opts: Optimizer settings, environment defaults when omitted

    Returns:
        ApproximationResult for the best restart

    Raises:
        DimensionMismatchError: If the set acts on a different space than ch
        InfeasibleError: If no restart reaches the honest region
        SolverFailureError: If a diamond-norm program fails to converge
    """
    opts = opts or OptimizerOptions()
    if mset.n_qubits != ch.n_qubits:
        raise DimensionMismatchError(
            f"mixing set acts on {mset.n_qubits} qubit(s), channel on {ch.n_qubits}"
        )
    if kraus_to_chi(ch).chi[0, 0].real >= 1.0 - IDENTITY_TOL:
        logger.info("channel is the identity; returning the identity mixture")
        return _identity_result(ch, mset)

    b, mode = honesty_bound(ch)
    problem = _Problem(
        target_choi=kraus_to_choi(ch),
        op_chois=np.stack([kraus_to_choi(QuantumChannel((u,))) for u in mset.ops]),
        op_blochs=np.stack([bloch_map(QuantumChannel((u,))).m for u in mset.ops]),
        b=b,
        identity_index=mset.identity_index,
        n_qubits=ch.n_qubits,
        penalty=opts.penalty,
        max_iter=opts.max_iter,
        bisection_tol=opts.bisection_tol,
    )
    tasks = [
        _RestartTask(problem, i, tuple(float(v) for v in start), scale)
        for i, (start, scale) in enumerate(_starting_points(problem, mset, opts))
    ]
    logger.info("approximating with %s: %d restarts, certificate mode %s", mset.name, len(tasks), mode.value)
    if opts.workers > 1:
        with ProcessPoolExecutor(max_workers=opts.workers) as pool:
            outcomes = list(pool.map(_run_restart, tasks))
    else:
        outcomes = [_run_restart(task) for task in tasks]

    best = _merge(outcomes, mset, opts.tie_tol)
    mixture = mset.mixture(best.probs)
    final = diamond_distance_from_choi(kraus_to_choi(mixture.to_channel()) - problem.target_choi, ch.n_qubits)
    certificate = certify(mixture.bloch_matrix(), ch, tol=opts.certificate_tol)
    if not certificate.passed:
        raise InfeasibleError(f"best mixture fails the certificate (min eig {certificate.min_eig_a_minus_b:.3e})")
    empirical = None
    if opts.empirical_samples > 0:
        empirical = empirical_honesty_check(mixture.to_channel(), ch, opts.empirical_samples, opts.seed)
    trace = OptimizerTrace(
        restarts=len(tasks),
        iterations=tuple(o.iterations for o in outcomes),
        best_per_restart=tuple(o.distance for o in outcomes),
        bisection_steps=best.bisection_steps,
        failed_restarts=sum(o.error is not None for o in outcomes),
    )
    logger.info("best restart %d: diamond %.6f, chi_diag %s", best.index, final.value,
                np.array2string(mixture.chi_diag(), precision=4))
    return ApproximationResult(
        mixture=mixture,
        chi_diag=mixture.chi_diag(),
        diamond_dist=final.value,
        certificate=certificate,
        solution=final.solution,
        trace=trace,
        empirical=empirical,
    )


def approximate_pauli(ch: QuantumChannel, opts: Optional[OptimizerOptions] = None) -> ApproximationResult:
    """Honest Pauli-channel approximation of a one- or two-qubit channel"""
    return approximate(ch, mixing_set("pauli", ch.n_qubits), opts)


def approximate_two_qubit_sparse(ch: QuantumChannel, support: Sequence[str],
                                 opts: Optional[OptimizerOptions] = None) -> ApproximationResult:
    """
    Honest Pauli approximation supported on the given two-qubit labels

    The certificate is conjectural on two qubits, so the result always
    carries an empirical check.
    """
    opts = opts or OptimizerOptions()
    if opts.empirical_samples == 0:
        opts = opts.model_copy(update={"empirical_samples": 10_000})
    return approximate(ch, sparse_pauli_set(support), opts)


def exact_dephasing_match(theta: float, axis: Sequence[float]) -> MixtureChannel:
    """
    Dephasing about ``axis`` with p = |sin(theta/2)|

    Its input-output distinguishability equals that of the rotation by
    ``theta`` about the same axis on every state.

    Raises:
        BadAxisError: If axis is not a unit 3-vector
    """
    reflection = axis_operator(axis)
    p = abs(math.sin(theta / 2))
    return MixtureChannel((np.eye(2, dtype=complex), reflection), np.array([1 - p, p]), ("I", "n.s"))
