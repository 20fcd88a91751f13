"""Frozen sign conventions for composite identities.

The manifest ``signs.json`` lists, per identity, a sign exponent as a small
integer expression in named degree variables.  ``sign_rule`` evaluates it;
``derive`` recomputes every entry by brute force on a generic algebra so
tests can compare the frozen manifest with a fresh derivation.
"""

from __future__ import annotations

import ast
import hashlib
import json
import operator
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import InputError, ParseError

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.FloorDiv: operator.floordiv}


def _eval(node: ast.AST, env: dict[str, int]) -> int:
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise InputError(f"sign exponent uses unbound variable {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval(node.operand, env)
    raise ParseError(f"unsupported syntax in sign exponent: {ast.dump(node)}")


@lru_cache(maxsize=None)
def _compile(expr: str) -> ast.Expression:
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"bad sign exponent {expr!r}") from exc
    _eval(tree, _Probe())  # reject unsupported syntax early
    return tree


class _Probe(dict):
    def __contains__(self, key) -> bool:
        return True

    def __getitem__(self, key) -> int:
        return 0


def evaluate_exponent(expr: str, **env: int) -> int:
    return _eval(_compile(expr), env)


_override: Path | None = None


def use_manifest(path: str | Path | None) -> None:
    """Replace the packaged manifest (None restores it)."""
    global _override
    _override = Path(path) if path is not None else None
    manifest.cache_clear()


def manifest_bytes() -> bytes:
    if _override is not None:
        return _override.read_bytes()
    return resources.files(__package__).joinpath("signs.json").read_bytes()


@lru_cache(maxsize=1)
def manifest() -> dict:
    try:
        data = json.loads(manifest_bytes())
    except json.JSONDecodeError as exc:
        raise ParseError(f"signs manifest is not valid JSON: {exc}") from exc
    rules = data.get("rules")
    if not isinstance(rules, dict):
        raise ParseError("signs manifest needs a 'rules' object")
    for name, rule in rules.items():
        if "exponent" not in rule:
            raise ParseError(f"sign rule {name!r} lacks an exponent")
        _compile(rule["exponent"])
    return data


def manifest_sha256() -> str:
    return hashlib.sha256(manifest_bytes()).hexdigest()


def exponent(name: str) -> str:
    rules = manifest()["rules"]
    if name not in rules:
        raise InputError(f"unknown sign rule {name!r}")
    return rules[name]["exponent"]


def sign_rule(name: str, **env: int) -> int:
    """(-1)^exponent for the named rule."""
    return -1 if evaluate_exponent(exponent(name), **env) % 2 else 1


# ------------------------------------------------------------ derivation


def _pick(test) -> int | None:
    """The unique s in (1, -1) for which ``test(s)`` holds, else None."""
    ok = [s for s in (1, -1) if test(s)]
    return ok[0] if len(ok) == 1 else None


def derive(seed: int = 0, samples: int = 3, max_arity: int = 3) -> dict[str, dict[tuple, int]]:
    """Recompute every sign in the manifest by brute force.

    Strict identities are sampled with random cochains and chains on
    matrix(2); identities that hold up to homotopy are tested on
    representatives of Hochschild classes of K[x]/(x^3).  Returns, per rule,
    a table from the rule's variable values to the observed sign; entries
    where the identity cannot distinguish the two signs are left out.
    """
    import random

    from . import hochschild as h
    from .algebra import builtin

    rng = random.Random(seed)
    gen = builtin("matrix(2)")
    out: dict[str, dict[tuple, int]] = {name: {} for name in manifest()["rules"]}

    def rc(p):
        return h.random_cochain(gen, p, rng)

    def rch(m):
        return h.random_chain(gen, m, rng, terms=4)

    def strict(name, key, make, lhs_rhs):
        for _ in range(samples):
            args = make()
            s = _pick(lambda s: lhs_rhs(s, *args))
            if s is not None:
                out[name][key] = s
                return

    ar = range(1, max_arity + 1)
    for p in ar:
        for q in ar:
            strict(
                "cup_leibniz", (p, q), lambda: (rc(p), rc(q)),
                lambda s, P, Q: h.cochain_boundary(h.cup(P, Q))
                == h.cup(h.cochain_boundary(P), Q) + h.cup(P, h.cochain_boundary(Q)).scale(s),
            )
            strict(
                "bracket_derivation", (p, q), lambda: (rc(p), rc(q)),
                lambda s, P, Q: h.cochain_boundary(h.gerstenhaber_bracket(P, Q))
                == h.gerstenhaber_bracket(h.cochain_boundary(P), Q).scale(s)
                + h.gerstenhaber_bracket(P, h.cochain_boundary(Q)),
            )
            m = p + q  # long enough for both operators to act
            strict(
                "lie_commutator", (p, q), lambda: (rc(p), rc(q), rch(m)),
                lambda s, P, Q, c: h.lie_derive_L(P, h.lie_derive_L(Q, c))
                - h.lie_derive_L(Q, h.lie_derive_L(P, c)).scale(s)
                == h.lie_derive_L(h.gerstenhaber_bracket(P, Q), c),
            )
    mu = h.multiplication(gen)
    for p in range(0, max_arity + 1):
        strict(
            "differential_vs_mu", (p,), lambda: (rc(p),),
            lambda s, P: h.cochain_boundary(P) == h.gerstenhaber_bracket(mu, P, allow_arity0=True).scale(s),
        )
        m = p + 1
        par = -1 if p % 2 else 1
        strict(
            "contraction_chain_map", (p,), lambda: (rc(p), rch(m)),
            lambda s, P, c: h.chain_boundary(h.contract_I(P, c))
            - h.contract_I(P, h.chain_boundary(c)).scale(par)
            == h.contract_I(h.cochain_boundary(P), c).scale(s),
        )
    for q in ar:
        strict(
            "connes_lie_commute", (q,), lambda: (rc(q), rch(q + 1)),
            lambda s, Q, c: h.connes_B(h.lie_derive_L(Q, c)) == h.lie_derive_L(Q, h.connes_B(c)).scale(s),
        )

    # identities up to homotopy, on classes of a commutative algebra with rich HH
    alg = builtin("truncated_poly(1,3)")
    co = {p: [h.vector_to_cochain(alg, p, z) for z in h.cochain_homology(alg, p).reps] for p in range(max_arity + 1)}
    chs = {m: [h.vector_to_chain(alg, m, z) for z in h.chain_homology(alg, m).reps] for m in range(max_arity + 2)}

    def exact(x) -> bool:
        return h.exactness_witness(x) is not None

    def homotopic(name, key, pairs):
        for args in pairs:
            s = _pick(lambda s: exact(args(s)))
            if s is not None:
                out[name][key] = s
                return

    for p in range(max_arity + 1):
        par = -1 if p % 2 else 1
        homotopic(
            "cartan_homotopy", (p,),
            [
                (lambda P, c: lambda s: h.connes_B(h.contract_I(P, c))
                 - h.contract_I(P, h.connes_B(c)).scale(par)
                 - h.lie_derive_L(P, c, allow_arity0=True).scale(s))(P, c)
                for m in range(p, max_arity + 1) for P in co[p] for c in chs[m]
            ],
        )
        for q in range(max_arity + 1 - p):
            homotopic(
                "cup_commutator", (p, q),
                [
                    (lambda P, Q: lambda s: h.cup(P, Q) - h.cup(Q, P).scale(s))(P, Q)
                    for P in co[p] for Q in co[q]
                ],
            )
    for a in range(max_arity + 1):
        # l is forced by delta i_a - (-1)^a i_a delta = l_a
        for m in range(max(a - 1, 0), max_arity + 1):
            if (a,) in out["cartan_homotopy"]:
                out["induced_lie_derivative"][(a, m)] = out["cartan_homotopy"][(a,)]

    def ind_l(P, c):
        return h.lie_derive_L(P, c, allow_arity0=True).scale(sign_rule("induced_lie_derivative", a=P.arity, m=c.length))

    for a in range(max_arity + 1):
        for b in range(max_arity + 1):
            if a + b - 1 < 0:
                continue
            sab = -1 if (a * (b + 1)) % 2 else 1
            pairs = [
                (lambda P, Q, c: lambda s: h.contract_I(P, ind_l(Q, c))
                 - ind_l(Q, h.contract_I(P, c)).scale(sab)
                 - h.contract_I(h.gerstenhaber_bracket(P, Q, allow_arity0=True), c).scale(s))(P, Q, c)
                for P in co[a] for Q in co[b]
                for m in range(a + b - 1, max_arity + 2) for c in chs.get(m, [])
                if m >= a and m >= b - 1
            ]
            homotopic("induced_bracket", (a, b), pairs)
    return out


def mismatches(derived: dict[str, dict[tuple, int]]) -> list[tuple[str, tuple, int, int]]:
    """Entries where a derived sign disagrees with the manifest."""
    bad = []
    for name, table in derived.items():
        names = manifest()["rules"][name]["vars"]
        for key, s in sorted(table.items()):
            frozen = sign_rule(name, **dict(zip(names, key)), **{v: 0 for v in names[len(key):]})
            if frozen != s:
                bad.append((name, key, frozen, s))
    return bad
