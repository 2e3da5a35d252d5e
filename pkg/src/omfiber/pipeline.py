"""Loading inputs and running the full set of verification checks."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from functools import cached_property

from .arrangement import from_arrangement
from .formats import FormatError, parse_arrangement, parse_covectors, sniff
from .homology import homology, interval_is_sphere, os_betti
from .milnor import MM, PP, ZM, ZP, Fibration, MilnorReport, check_proof_matching, check_quasi_fibration, fibration, milnor_report
from .salvetti import Salvetti, salvetti_poset
from .signs import OrientedMatroid, from_covectors
from .subdivision import CheckReport, RankSalvetti, rank_subdivide_salvetti, verify_subdivision

THREADS_ENV = "OMFIBER_THREADS"


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def load_oriented_matroid(text: str) -> OrientedMatroid:
    """Arrangement or covector file text to a validated oriented matroid."""
    kind = sniff(text)
    if kind == "arr":
        return from_arrangement(parse_arrangement(text))
    if kind == "om":
        return from_covectors(parse_covectors(text))
    raise FormatError(f"expected an 'arr' or 'om' file, found {kind!r}")


class Pipeline:
    """Lazily built stages for one oriented matroid."""

    def __init__(self, om: OrientedMatroid):
        self.om = om

    @cached_property
    def salvetti(self) -> Salvetti:
        return salvetti_poset(self.om)

    @cached_property
    def rksd(self) -> RankSalvetti:
        return rank_subdivide_salvetti(self.om, self.salvetti)

    @cached_property
    def fibration(self) -> Fibration:
        return fibration(self.om, self.rksd)

    @cached_property
    def milnor(self) -> MilnorReport:
        return milnor_report(self.om, self.fibration)

    # -- checks ---------------------------------------------------------------

    def check_salvetti(self) -> CheckReport:
        rep = CheckReport()
        h = homology(self.salvetti.poset)
        ob = os_betti(self.om.geometric_lattice)
        rep.add("salvetti_matches_os", h.betti == ob.betti and not h.torsion, h.to_json())
        p = self.salvetti.poset
        bad = [self.salvetti.label(i) for i in range(len(p)) if not interval_is_sphere(p, i)]
        rep.add("salvetti_cw_intervals", not bad, bad or None)
        grading = all(p.height(i) == self.salvetti.dimension(i) for i in range(len(p)))
        rep.add("salvetti_grading", grading)
        return rep

    def check_rksd(self) -> CheckReport:
        rep = CheckReport()
        h_s = homology(self.salvetti.poset)
        h_r = homology(self.rksd.poset)
        rep.add("rksd_homology_equals_salvetti", h_r.same_as(h_s), h_r.to_json())
        rep.add("rksd_euler", self.rksd.euler() == sum((-1) ** d * c for d, c in enumerate(self.salvetti.f_vector())))
        return rep

    def check_subdivisions(self) -> CheckReport:
        rep = CheckReport()
        for b in range(len(self.om.topes)):
            sub = verify_subdivision(self.om, b)
            for name, ok in sub.checks.items():
                rep.add(f"base{b}:{name}", ok, sub.details.get(name) if not ok else None)
        return rep

    def check_euler(self) -> CheckReport:
        rep = CheckReport()
        m = self.milnor
        rep.add("euler_identity", m.euler_identity_ok, {"euler": m.homology.euler, "n_chi_projective": m.n * m.chi_projective})
        return rep

    def check_all(self, threads: int = 1) -> CheckReport:
        """Every verification, merged in a fixed order regardless of ``threads``."""
        fib = self.fibration  # build shared stages before fanning out
        tasks = [
            self.check_salvetti,
            self.check_subdivisions,
            self.check_rksd,
            lambda: check_quasi_fibration(fib),
            self.check_euler,
        ] + [(lambda a=a, b=b: check_proof_matching(fib, a, b)) for a in (PP, MM) for b in (ZP, ZM)]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(lambda f: f(), tasks))
        else:
            parts = [f() for f in tasks]
        out = CheckReport()
        for part in parts:
            out.checks.update(part.checks)
            out.details.update(part.details)
        return out
