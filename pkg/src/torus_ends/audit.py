"""Opt-in structural checks on every state the searches visit.

Enable with ``with AUDIT.recording(kappa): ...``; violations are counted
and the first few kept for inspection.  Disabled it costs one attribute
lookup per call.
"""

from __future__ import annotations

import contextlib
import math

EPS = 1e-9


class Audit:
    def __init__(self):
        self.enabled = False
        self.reset()

    def reset(self):
        self.counts = {"edges": 0, "vertices": 0, "edge_bound": 0, "two_outward": 0, "relation": 0, "pruned": 0}
        self.violations: list[tuple[str, object]] = []

    @contextlib.contextmanager
    def recording(self):
        old = self.enabled
        self.enabled = True
        try:
            yield self
        finally:
            self.enabled = old

    def _fail(self, kind, obj):
        if len(self.violations) < 50:
            self.violations.append((kind, obj))
        else:
            self.violations.append((kind, None))

    def edge(self, st):
        if not self.enabled:
            return
        self.counts["edges"] += 1
        self.counts["edge_bound"] += 1
        if not st.bound_ok():
            self._fail("edge_bound", st)
        if not st.relation_ok():
            self._fail("edge_relation", st)

    def vertex(self, triple, values, out_pairs):
        """Two outward arrows sharing region X force |x| <= 2 or the other two vanish."""
        if not self.enabled:
            return
        self.counts["vertices"] += 1
        if len(out_pairs) < 2:
            return
        self.counts["two_outward"] += 1
        vals = dict(zip(triple.slopes(), values))
        for i in range(len(out_pairs)):
            for j in range(i + 1, len(out_pairs)):
                common = set(out_pairs[i].slopes()) & set(out_pairs[j].slopes())
                (X,) = common
                others = [s for s in triple.slopes() if s != X]
                x = vals[X]
                ax = math.inf if not _finite(x) else abs(x)
                if ax <= 2 + EPS * 10:
                    continue
                if all(_finite(vals[o]) and abs(vals[o]) <= EPS * (1 + ax) for o in others):
                    continue
                self._fail("two_outward", (triple, values))

    def vertex_relation(self, state, kappa):
        if not self.enabled:
            return
        self.counts["relation"] += 1
        if not state.relation_ok(kappa):
            self._fail("vertex_relation", state)

    def pruned(self, ok: bool, obj):
        if not self.enabled:
            return
        self.counts["pruned"] += 1
        if not ok:
            self._fail("pruned", obj)


def _finite(v) -> bool:
    return math.isfinite(v.real) and math.isfinite(v.imag)


AUDIT = Audit()
