"""Atom universes and the tuple-to-primary-variable layout for a target size."""
from __future__ import annotations

from dataclasses import dataclass, field

from .lang.ast import Model


@dataclass(frozen=True)
class Universe:
    """Per-size atom pools, keyed by top-level signature in declaration order."""

    size: int
    atoms: dict[str, tuple[str, ...]]
    all_atoms: tuple[str, ...] = field(default=())
    index: dict[str, int] = field(default_factory=dict)

    @staticmethod
    def build(pools: dict[str, tuple[str, ...]], size: int) -> "Universe":
        flat = tuple(a for pool in pools.values() for a in pool)
        return Universe(size, pools, flat, {a: i for i, a in enumerate(flat)})


def build_universe(model: Model, k: int) -> Universe:
    """Atom pools at target size k: k atoms per top-level signature, one atom
    for each `one` signature.  Extension signatures own no atoms."""
    if k < 1:
        raise ValueError("target size must be at least 1")
    tops = model.top_level()
    initials: dict[str, int] = {}
    for s in tops:
        initials[s.name[0]] = initials.get(s.name[0], 0) + 1
    pools: dict[str, tuple[str, ...]] = {}
    for s in tops:
        prefix = s.name if initials[s.name[0]] > 1 else s.name[0]
        count = 1 if s.is_one else k
        pools[s.name] = tuple(f"{prefix}{i}" for i in range(count))
    return Universe.build(pools, k)


@dataclass(frozen=True)
class TupleTable:
    """Bijection between candidate tuples and primary variables 1..P.

    Allocation order: signatures in declaration order (unary membership
    tuples), then fields in declaration order (binary tuples, row-major by
    owner atom).  `one` and abstract signatures allocate no variables.
    """

    model: Model
    universe: Universe
    entries: dict[tuple[str, tuple[str, ...]], int]
    per_sig_vars: dict[str, tuple[int, ...]]
    num_primary: int
    by_var: tuple[tuple[str, tuple[str, ...]], ...]  # index 0 unused

    def var_for(self, relation: str, atoms: tuple[str, ...]) -> int:
        return self.entries[(relation, atoms)]


def pool_of(model: Model, universe: Universe, sig_name: str) -> tuple[str, ...]:
    """The atom pool a signature draws from: its root ancestor's pool."""
    return universe.atoms[model.root_of(sig_name).name]


def allocate_primary_vars(model: Model, universe: Universe) -> TupleTable:
    entries: dict[tuple[str, tuple[str, ...]], int] = {}
    per_sig: dict[str, tuple[int, ...]] = {}
    by_var: list[tuple[str, tuple[str, ...]]] = [("", ())]
    nxt = 1
    for s in model.sigs:
        if s.is_one or s.is_abstract:
            per_sig[s.name] = ()
            continue
        ids = []
        for atom in pool_of(model, universe, s.name):
            entries[(s.name, (atom,))] = nxt
            by_var.append((s.name, (atom,)))
            ids.append(nxt)
            nxt += 1
        per_sig[s.name] = tuple(ids)
    for owner, f in model.fields_in_order():
        owner_pool = pool_of(model, universe, owner.name)
        target_pool = pool_of(model, universe, f.target)
        for a in owner_pool:
            for b in target_pool:
                entries[(f.name, (a, b))] = nxt
                by_var.append((f.name, (a, b)))
                nxt += 1
    return TupleTable(model, universe, entries, per_sig, nxt - 1, tuple(by_var))


def dump_varmap(table: TupleTable) -> str:
    """Text table `varId TAB relation TAB tuple`, in allocation order."""
    lines = []
    for var in range(1, table.num_primary + 1):
        rel, atoms = table.by_var[var]
        lines.append(f"{var}\t{rel}\t{','.join(atoms)}")
    return "\n".join(lines) + ("\n" if lines else "")
