"""Reproducible verification scenarios.

A scenario is a JSON object::

    {"seed": 7, "sample_count": 25, "model": "builtin",
     "tasks": [{"task": "build"}, {"task": "rootfree", "samples": 25}, ...]}

``model`` is ``"builtin"`` or a path (relative to the scenario file) to a
model emitted by ``kummer build``, optionally ``{"path": ..., "expect_digest": ...}``.
Random samples come from ``numpy.random.default_rng(seed)`` (PCG64); every
task that samples derives its own generator from the scenario seed and the
task index so reordering tasks does not change another task's samples.
"""

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__, linalg, serialize
from .errors import CapExceeded, KummerLatError, NotSymmetric, SchemaError

PASS, FAIL, INCOMPLETE = "pass", "fail", "incomplete"
EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INCOMPLETE = 0, 1, 2, 3
PRNG = "numpy PCG64 via default_rng(seed)"

TASKS = ("build", "verify-model", "verify-lemma33", "rootfree", "twisted", "stab-check",
         "walls", "lift")


@dataclass
class Scenario:
    tasks: list
    seed: int = 0
    sample_count: int = 25
    model: object = "builtin"
    base_dir: str = "."
    digest: str = ""


@dataclass
class TaskResult:
    index: int
    task: str
    status: str
    details: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    error: str = ""
    timing: float = 0.0

    def body(self):
        d = {"index": self.index, "task": self.task, "status": self.status,
             "details": self.details, "witnesses": self.witnesses}
        if self.error:
            d["error"] = self.error
        return d


@dataclass
class Report:
    results: list
    seed: int
    scenario_digest: str
    model_digest: str = ""

    @property
    def status(self):
        st = [r.status for r in self.results]
        if FAIL in st:
            return FAIL
        if INCOMPLETE in st:
            return INCOMPLETE
        return PASS

    @property
    def exit_code(self):
        return {PASS: EXIT_OK, FAIL: EXIT_FAIL, INCOMPLETE: EXIT_INCOMPLETE}[self.status]

    def body(self):
        """Everything except timings; identical for identical scenario + seed."""
        return {"tool": "kummerlat", "version": __version__, "prng": PRNG, "seed": self.seed,
                "input_digests": {"scenario": self.scenario_digest, "model": self.model_digest},
                "status": self.status, "exit_code": self.exit_code,
                "tasks": [r.body() for r in self.results]}

    def to_json(self, timings=True):
        d = self.body()
        if timings:
            d["timings"] = {str(r.index): round(r.timing, 6) for r in self.results}
        return d

    def body_text(self):
        return serialize.canonical_dumps(self.body())


# ---------------------------------------------------------------------------
# parsing


def parse_scenario(text, base_dir="."):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(d, dict):
        raise SchemaError("scenario must be a JSON object")
    unknown = set(d) - {"seed", "sample_count", "model", "tasks", "description"}
    if unknown:
        raise SchemaError(f"unknown keys {sorted(unknown)}", "scenario")
    tasks = d.get("tasks")
    if not isinstance(tasks, list) or not tasks:
        raise SchemaError("need a non-empty list", "tasks")
    for i, t in enumerate(tasks):
        if not isinstance(t, dict) or "task" not in t:
            raise SchemaError("each task needs a 'task' key", f"tasks[{i}]")
        if t["task"] not in TASKS:
            raise SchemaError(f"unknown task {t['task']!r}; expected one of {TASKS}",
                              f"tasks[{i}].task")
    seed = d.get("seed", 0)
    count = d.get("sample_count", 25)
    for name, val in (("seed", seed), ("sample_count", count)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 0:
            raise SchemaError("must be a non-negative integer", name)
    uses_random = any(t["task"] in ("rootfree", "twisted") for t in tasks)
    if uses_random and "seed" not in d and not all("seed" in t for t in tasks
                                                     if t["task"] in ("rootfree", "twisted")):
        raise SchemaError("a seed is required when sampling tasks are present", "seed")
    model = d.get("model", "builtin")
    if not (model == "builtin" or isinstance(model, str)
            or (isinstance(model, dict) and "path" in model)):
        raise SchemaError("expected 'builtin', a path, or {path, expect_digest}", "model")
    digest = hashlib.sha256(serialize.canonical_dumps(d).encode()).hexdigest()
    return Scenario(tasks, seed, count, model, base_dir, digest)


def load_scenario(path):
    with open(path) as fh:
        text = fh.read()
    return parse_scenario(text, os.path.dirname(os.path.abspath(path)))


# ---------------------------------------------------------------------------
# tasks


class _Ctx:
    def __init__(self, scenario):
        self.scenario = scenario
        self._model = None
        self.model_digest = ""

    def model(self):
        if self._model is None:
            from .kummer import build_mukai_model

            ref = self.scenario.model
            if ref == "builtin":
                self._model = build_mukai_model()
            else:
                path = ref if isinstance(ref, str) else ref["path"]
                expect = None if isinstance(ref, str) else ref.get("expect_digest")
                if not os.path.isabs(path):
                    path = os.path.join(self.scenario.base_dir, path)
                self._model = serialize.load_model(path, expect)
            self.model_digest = serialize.model_digest(self._model)
        return self._model

    def rng(self, index, task):
        seed = task.get("seed", self.scenario.seed)
        return np.random.default_rng([int(seed), index])


def task_build(ctx, index, t):
    M = ctx.model()
    cert = M.certification()
    ok = cert["even"] and abs(cert["det"]) == 1 and cert["signature"] == (4, 20)
    details = {"rank": M.lattice.rank, "even": cert["even"], "det": cert["det"],
               "signature": list(cert["signature"]), "digest": serialize.model_digest(M)}
    wit = [] if ok else [{"certification": details}]
    return (PASS if ok else FAIL), details, wit


def verify_model_certificate(M):
    """Re-derive the certificate of the rank-24 model from its stored data.

    Returns (ok, details, witnesses).
    """
    wit = []
    G = M.lattice.gram
    recomputed = linalg.normalize_matrix(M.basis.dot(M.ambient_gram).dot(M.basis.T))
    bad = next(([i, j] for i in range(G.shape[0]) for j in range(G.shape[1])
                if recomputed[i, j] != G[i, j]), None)
    if bad:
        wit.append({"gram_mismatch": bad})
    cert = M.certification()
    if not cert["even"]:
        wit.append({"odd_diagonal": next(i for i in range(G.shape[0]) if G[i, i] % 2)})
    if abs(cert["det"]) != 1:
        wit.append({"det": cert["det"]})
    if cert["signature"] != (4, 20):
        wit.append({"signature": list(cert["signature"])})
    # the hyperbolic block and the exceptional classes
    n = M.named
    p0, p1 = M.pi_star([1] + [0] * 7), M.pi_star([0] * 7 + [1])
    block = [[M.ambient_pair(a, b) for b in (p0, p1)] for a in (p0, p1)]
    if block != [[0, 2], [2, 0]]:
        wit.append({"pi_star_block": [[str(x) for x in r] for r in block]})
    for i, e in enumerate(n["E_hat"]):
        for j, f in enumerate(n["E_hat"]):
            if M.ambient_pair(e, f) != (-2 if i == j else 0):
                wit.append({"E_hat_pair": [i, j]})
        if M.ambient_pair(e, n["u"]) or M.ambient_pair(e, n["u0"]):
            wit.append({"E_hat_not_orthogonal_to_u": i})
    hyp = [[M.ambient_pair(a, b) for b in (n["u0"], n["u"])] for a in (n["u0"], n["u"])]
    details = {"even": cert["even"], "det": cert["det"], "signature": list(cert["signature"]),
               "u_block": [[str(x) for x in r] for r in hyp],
               "pi_star_block": [[str(x) for x in r] for r in block]}
    return not wit, details, wit


def task_verify_model(ctx, index, t):
    ok, details, wit = verify_model_certificate(ctx.model())
    return (PASS if ok else FAIL), details, wit


def task_rootfree(ctx, index, t):
    from .enumeration import roots_in_complement
    from .kummer import induced_four_plane, orbifold_map, sample_geometric_interpretation

    M = ctx.model()
    n = int(t.get("samples", ctx.scenario.sample_count))
    cap = t.get("cap")
    rng = ctx.rng(index, t)
    counts, wit = [], []
    incomplete = False
    for k in range(n):
        g = sample_geometric_interpretation(rng)
        try:
            res = roots_in_complement(M, induced_four_plane(g, M), cap=cap)
        except CapExceeded as e:
            incomplete = True
            counts.append(None)
            wit.append({"sample": k, "cap_hit": e.count})
            continue
        counts.append(len(res.roots))
        if res.roots:
            wit.append({"sample": k, "root": [str(x) for x in res.roots[0]],
                        "torus": g.to_json()})
    details = {"samples": n, "root_counts": counts,
               "empty": sum(1 for c in counts if c == 0)}
    ok = not wit
    if t.get("positive_control", True):
        g = sample_geometric_interpretation(rng)
        B, _, _ = orbifold_map(g, M)
        shifted = B - M.named["B_Z"] * Fraction(1, 2)
        res = roots_in_complement(M, induced_four_plane(g, M, b_override=shifted), cap=cap)
        details["positive_control_roots"] = len(res.roots)
        if not res.roots:
            ok = False
            wit.append({"positive_control": "no roots found without the B_Z half"})
    status = PASS if ok and not incomplete else (INCOMPLETE if ok else FAIL)
    return status, details, wit


def sample_twisted_bfield(rng, T, n, tries=200):
    """B_A in (1/n) H^2(T, Z) whose pairing with T(A) has order exactly n."""
    for _ in range(tries):
        B = tuple(Fraction(int(x), n) for x in rng.integers(-3, 4, size=6))
        vals = [Fraction(T.ambient.pair(t, B)) for t in T.basis]
        order = 1
        for v in vals:
            order = order * v.denominator // np.gcd(order, v.denominator)
        if order == n:
            return B
    raise KummerLatError(f"no B-field of order {n} found")


def task_twisted(ctx, index, t):
    from .kummer import (TORUS, sample_geometric_interpretation, transcendental_lattice,
                         twisted_kernel, verify_twisted_isometry)

    M = ctx.model()
    orders = t.get("orders", [2, 3, 4])
    n = int(t.get("samples", max(5, len(orders))))
    rng = ctx.rng(index, t)
    rows, wit = [], []
    for k in range(n):
        order = orders[k % len(orders)]
        g = sample_geometric_interpretation(rng)
        _, T = transcendental_lattice(TORUS.h2_lattice(), [g.omega1, g.omega2])
        B_A = sample_twisted_bfield(rng, T, order)
        tk = twisted_kernel(T, B_A, order)
        rep = verify_twisted_isometry(g, B_A, M)
        omit = verify_twisted_isometry(g, B_A, M, b_override=M.pi_star(B_A) * Fraction(1, 2))
        rows.append({"n": order, "kernel_index": tk.index, "isometry": rep.passed,
                     "omit_half_BZ_passes": omit.passed})
        if tk.index != order:
            wit.append({"sample": k, "kernel_index": tk.index, "n": order})
        if not rep.passed:
            wit.append({"sample": k, "isometry": {
                "image_in_target": rep.image_in_target, "gram_doubled": rep.gram_doubled,
                "closure": rep.image_is_primitive_closure}})
    return (PASS if not wit else FAIL), {"samples": rows}, wit


def _numerical(ctx, t):
    from .kummer import GeometricInterpretation, standard_geometric_interpretation
    from .stability import NumericalLattice

    if "ns" in t:
        return serialize.numerical_from_json(t["ns"])
    g = GeometricInterpretation.from_json(t["torus"]) if "torus" in t \
        else standard_geometric_interpretation()
    return NumericalLattice.from_kummer(ctx.model(), g)


def membership_json(m):
    d = dict(m.flags())
    d["complete"] = m.complete
    d["witness"] = {k: serialize.mukai_to_json(v) for k, v in m.witness.items()}
    if m.notes:
        d["notes"] = list(m.notes)
    return d


def task_stab_check(ctx, index, t):
    from .stability import ChamberPoint, exp_vector, membership, sufficiency_check

    N = _numerical(ctx, t)
    p = ChamberPoint(tuple(serialize.dec_vector(t["B"], "B")),
                     tuple(serialize.dec_vector(t["omega"], "omega")))
    r_max = t.get("r_max")
    m = membership(N, exp_vector(p, N), r_max)
    suff = sufficiency_check(p, N, r_max)
    details = {"membership": membership_json(m), "sufficiency": {
        "status": suff.status, "complete": suff.complete,
        "delta": None if suff.delta is None else serialize.mukai_to_json(suff.delta),
        "charge": None if suff.charge is None else [str(x) for x in suff.charge]}}
    wit = []
    for key, want in (t.get("expect") or {}).items():
        got = details["sufficiency"]["status"] if key == "sufficiency" else m.flags().get(key)
        if got != want:
            wit.append({"expected": {key: want}, "got": got})
    if wit:
        return FAIL, details, wit
    return (PASS if m.complete and suff.complete else INCOMPLETE), details, wit


def event_json(e):
    return {"segment": e.segment, "t": str(e.t), "interval": [str(e.interval[0]), str(e.interval[1])],
            "exact": e.exact, "pair": list(e.pair), "sign_before": e.sign_before,
            "sign_after": e.sign_after}


def task_walls(ctx, index, t):
    from .stability import wall_crossings

    N = _numerical(ctx, t)
    path = serialize.path_from_json(t["path"])
    vecs = serialize.vectors_from_json(t["vectors"])
    events = wall_crossings(path, vecs, N)
    details = {"events": [event_json(e) for e in events]}
    wit = []
    if "expect_events" in t and len(events) != t["expect_events"]:
        wit.append({"expected_events": t["expect_events"], "got": len(events)})
    return (PASS if not wit else FAIL), details, wit


def task_lift(ctx, index, t):
    from .stability import lift_path_winding

    N = _numerical(ctx, t)
    path = serialize.path_from_json(t["path"])
    res = lift_path_winding(path, N)
    details = {"winding": res.winding, "loop": res.is_loop, "half_turns": str(res.half_turns),
               "endpoint_phase": str(res.endpoint.phase)}
    wit = []
    if "expect_winding" in t and res.winding != t["expect_winding"]:
        wit.append({"expected_winding": t["expect_winding"], "got": res.winding})
    return (PASS if not wit else FAIL), details, wit


_DISPATCH = {"build": task_build, "verify-model": task_verify_model,
             "verify-lemma33": task_verify_model,
             "rootfree": task_rootfree, "twisted": task_twisted,
             "stab-check": task_stab_check, "walls": task_walls, "lift": task_lift}


def run_scenario(s, on_result=None):
    """Run every task in order. Module errors fail their task; IO and schema
    errors propagate (the caller maps them to exit code 1)."""
    ctx = _Ctx(s)
    results = []
    for i, t in enumerate(s.tasks):
        t0 = time.perf_counter()
        try:
            status, details, wit = _DISPATCH[t["task"]](ctx, i, t)
            res = TaskResult(i, t["task"], status, details, wit)
        except (SchemaError, OSError):
            raise
        except NotSymmetric as e:
            res = TaskResult(i, t["task"], FAIL, {}, [{"asymmetric_cell": list(e.cell)}],
                             f"task {i}: {type(e).__name__}: {e}")
        except (KummerLatError, ValueError, KeyError) as e:
            res = TaskResult(i, t["task"], FAIL, {}, [],
                             f"task {i}: {type(e).__name__}: {e}")
        res.timing = time.perf_counter() - t0
        results.append(res)
        if on_result is not None:
            on_result(res)
    return Report(results, s.seed, s.digest, ctx.model_digest)
