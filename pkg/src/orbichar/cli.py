"""Command-line interface with exact JSON input and output.

All values are exact: rationals are serialized as "p/q" strings (bare "p"
for integers), never floats.  Exit codes are a stable contract: 0 success,
2 malformed input, 3 unsupported or oversized group, 4 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .classify import (
    InsufficientData,
    InvalidSequenceError,
    char_sequence,
    iter_signatures_by_chi_es,
    reconstruct,
    search_collisions,
)
from .constructions import (
    ConstructionError,
    base_pair,
    build_collision_pair,
    expand_family,
    general_gamma_family,
    same_level_family,
)
from .core import (
    FgAbelian,
    FreeGroup,
    GammaDescriptor,
    GammaSupportError,
    MirroredCylinder,
    OrbifoldSignature,
    chi_es,
    chi_es_mirrored,
    chi_gamma,
    chi_gamma_times_manifold,
    chi_level,
    format_rational,
    is_diffeomorphic,
    parse_rational,
    parse_signature,
)
from .sectors import (
    FiniteGroup,
    FixedPointCharacter,
    HomBudgetExceeded,
    chi_gamma_mirrored,
    chi_gamma_quotient,
    group_by_name,
    hom_classes,
    rotation_kernel,
    rotation_sphere_action,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_BAD_GAMMA = 3
EXIT_VERIFICATION = 4


def parse_gamma_spec(spec: str) -> GammaDescriptor:
    """Parse a group spec: "trivial", "F_k", or "+"-joined "Z^l" / "Z/d"."""
    spec = spec.strip()
    if spec == "trivial":
        return FgAbelian(0, ())
    if spec.startswith("F_"):
        tail = spec[2:]
        if not tail.isdigit():
            raise GammaSupportError(f"bad free-group spec {spec!r}")
        return FreeGroup(int(tail))
    rank = 0
    torsion = []
    for part in spec.split("+"):
        part = part.strip()
        if part == "Z":
            rank += 1
        elif part.startswith("Z^") and part[2:].isdigit():
            rank += int(part[2:])
        elif part.startswith("Z/") and part[2:].isdigit():
            torsion.append(int(part[2:]))
        else:
            raise GammaSupportError(f"bad group spec component {part!r}")
    try:
        return FgAbelian(rank, tuple(torsion))
    except ValueError as exc:
        raise GammaSupportError(str(exc)) from exc


def load_signature(text: str) -> OrbifoldSignature:
    """Accept a file path, inline JSON, or the Sigma_g(...) sugar."""
    if os.path.exists(text):
        with open(text, encoding="utf-8") as handle:
            return OrbifoldSignature.from_json(json.load(handle))
    stripped = text.strip()
    if stripped.startswith("{"):
        return OrbifoldSignature.from_json(json.loads(stripped))
    return parse_signature(stripped)


def load_group(text: str) -> FiniteGroup:
    if os.path.exists(text):
        with open(text, encoding="utf-8") as handle:
            return FiniteGroup.from_json(json.load(handle))
    return group_by_name(text)


def _print_json(payload) -> None:
    json.dump(payload, sys.stdout, separators=(",", ":"))
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_chi(args) -> int:
    sig = load_signature(args.sig)
    if args.seq_len is not None:
        values = [format_rational(v) for v in char_sequence(sig, args.seq_len)]
        if args.json:
            _print_json({"values": values})
        else:
            print(",".join(values))
        return EXIT_OK
    if args.l is not None:
        value = chi_level(sig, args.l)
    elif args.gamma is not None:
        value = chi_gamma(sig, parse_gamma_spec(args.gamma))
    else:
        value = chi_es(sig)
    if args.json:
        _print_json({"value": format_rational(value)})
    else:
        print(format_rational(value))
    return EXIT_OK


def cmd_construct(args) -> int:
    seeds = [int(part) for part in args.orders.split(",") if part.strip()]
    pair = build_collision_pair(args.level, args.genus, seeds, equalize=args.equalize)
    if args.members is None:
        family = list(pair)
    else:
        family = expand_family(*pair, args.members, args.level)
    sequences = [char_sequence(sig, args.level) for sig in family]
    agree = all(seq == sequences[0] for seq in sequences)
    distinct = len(set(family)) == len(family)
    if not (agree and distinct):
        raise ConstructionError("constructed family failed verification")
    _print_json(
        {
            "family": [sig.to_json() for sig in family],
            "verification": {
                "char_sequences": [
                    [format_rational(v) for v in seq] for seq in sequences
                ],
                "agree_through_level": args.level,
                "pairwise_distinct": distinct,
            },
        }
    )
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    values = [parse_rational(part) for part in args.seq.split(",")]
    result = reconstruct(values)
    if isinstance(result, InsufficientData):
        _print_json({"status": "insufficient-data", "reason": result.reason})
    else:
        _print_json(result.to_json())
    return EXIT_OK


def cmd_enumerate(args) -> int:
    target = parse_rational(args.chi_es)
    for sig in iter_signatures_by_chi_es(target):
        _print_json(sig.to_json())
    return EXIT_OK


def cmd_search(args) -> int:
    groups = search_collisions(args.genus_max, args.count_max, args.order_max, args.level)
    _print_json(
        [
            {
                "values": [format_rational(v) for v in group.values],
                "signatures": [sig.to_json() for sig in group.signatures],
            }
            for group in groups
        ]
    )
    return EXIT_OK


def cmd_quotient(args) -> int:
    group = load_group(args.group)
    with open(args.fpc, encoding="utf-8") as handle:
        fixed = FixedPointCharacter.from_json(json.load(handle))
    value = chi_gamma_quotient(group, fixed, parse_gamma_spec(args.gamma))
    if args.json:
        _print_json({"value": format_rational(value)})
    else:
        print(format_rational(value))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Built-in verification scenarios (reference values from the literature)
# ---------------------------------------------------------------------------

def _scenario_same_esc_same_genus() -> list[tuple[bool, str]]:
    checks = []
    for genus in range(6):
        nine_threes = OrbifoldSignature(genus, {3: 9})
        eight_fours = OrbifoldSignature(genus, {4: 8})
        expected = Fraction(-4 - 2 * genus)
        ok = chi_es(nine_threes) == chi_es(eight_fours) == expected
        checks.append((ok, f"chi_es of {nine_threes!r} and {eight_fours!r} both {format_rational(expected)}"))
        checks.append((not is_diffeomorphic(nine_threes, eight_fours), "the two are distinct"))
    return checks


def _scenario_same_level() -> list[tuple[bool, str]]:
    checks = []
    for order, level in ((3, 2), (3, 3), (5, 2), (7, 3)):
        family = same_level_family(order, level, 5)
        ok = all(chi_level(sig, level) == 2 for sig in family)
        checks.append((ok, f"5 orbifolds with order-{order} cones all have chi_{level} = 2"))
    return checks


def _scenario_base_pairs() -> list[tuple[bool, str]]:
    checks = []
    for seed in range(2, 11):
        for genus in range(4):
            first, second = base_pair(genus, seed)
            expected = [
                Fraction(1, seed) - 1 - 2 * genus,
                Fraction(2 - 2 * genus),
                Fraction(1 - 2 * genus + 5 * seed + 2 * seed * seed),
            ]
            ok = (
                char_sequence(first, 2) == expected
                and char_sequence(second, 2) == expected
                and not is_diffeomorphic(first, second)
            )
            checks.append((ok, f"base pair seed={seed} genus={genus} matches closed forms"))
    return checks


_QUOTIENT_BATTERY: tuple[tuple[str, GammaDescriptor], ...] = (
    ("trivial", FgAbelian(0)),
    ("Z", FgAbelian(1)),
    ("Z^2", FgAbelian(2)),
    ("Z^3", FgAbelian(3)),
    ("Z/2", FgAbelian(0, (2,))),
    ("Z/6", FgAbelian(0, (6,))),
    ("Z+Z/4", FgAbelian(1, (4,))),
)

_MIRRORED_BATTERY: tuple[tuple[str, GammaDescriptor], ...] = (
    ("trivial", FgAbelian(0)),
    ("Z", FgAbelian(1)),
    ("Z^2", FgAbelian(2)),
    ("Z^3", FgAbelian(3)),
    ("Z/2", FgAbelian(0, (2,))),
    ("Z/3", FgAbelian(0, (3,))),
    ("Z+Z/2", FgAbelian(1, (2,))),
)


def _scenario_noneffective() -> list[tuple[bool, str]]:
    checks = []
    effective = rotation_sphere_action(6, 1)
    noneffective = rotation_sphere_action(6, 2)
    checks.append((len(rotation_kernel(6, 1)) == 1, "step-1 rotation acts effectively"))
    checks.append((len(rotation_kernel(6, 2)) == 2, "step-2 rotation has a kernel of order 2"))
    classes = hom_classes(FgAbelian(1), effective[0])
    per_class = [Fraction(2, cls.centralizer_order) for cls in classes]
    checks.append(
        (
            len(classes) == 6 and all(v == Fraction(1, 3) for v in per_class),
            "six classes of Z-sectors, each contributing 1/3",
        )
    )
    for name, gamma in _QUOTIENT_BATTERY:
        lhs = chi_gamma_quotient(*effective, gamma)
        rhs = chi_gamma_quotient(*noneffective, gamma)
        checks.append((lhs == rhs, f"gamma={name}: both actions give {format_rational(lhs)}"))
    checks.append(
        (
            chi_gamma_quotient(*effective, FgAbelian(1)) == 2,
            "Z-sector total for the effective action is 2",
        )
    )
    return checks


def _scenario_nonorientable() -> list[tuple[bool, str]]:
    checks = []
    first = MirroredCylinder((3, 5), (7, 11))
    second = MirroredCylinder((3, 7), (5, 11))
    expected = Fraction(-1867, 1155)
    checks.append(
        (
            chi_es_mirrored(first) == chi_es_mirrored(second) == expected,
            f"both mirrored cylinders have chi_es {format_rational(expected)}",
        )
    )
    checks.append((not is_diffeomorphic(first, second), "boundary multisets distinguish them"))
    for name, gamma in _MIRRORED_BATTERY:
        lhs = chi_gamma_mirrored(first, gamma)
        rhs = chi_gamma_mirrored(second, gamma)
        checks.append((lhs == rhs, f"gamma={name}: both cylinders give {format_rational(lhs)}"))
    return checks


def _scenario_general_dimension() -> list[tuple[bool, str]]:
    groups: list[GammaDescriptor] = [FgAbelian(1, (4,)), FgAbelian(0, (3,)), FgAbelian(2)]
    family = general_gamma_family(groups, 3, 0)
    checks = [(len(set(family)) == 3, "three pairwise distinct signatures")]
    for sphere_chi, label in ((2, "even-dimensional sphere factor"), (0, "odd-dimensional sphere factor")):
        for gamma in groups:
            values = {chi_gamma_times_manifold(sig, gamma, sphere_chi) for sig in family}
            checks.append(
                (len(values) == 1, f"{label}: equal products for {gamma!r}")
            )
    return checks


_SCENARIOS = {
    "sameESCsameg": _scenario_same_esc_same_genus,
    "sameLESC": _scenario_same_level,
    "basecase": _scenario_base_pairs,
    "noneffective": _scenario_noneffective,
    "nonorientable": _scenario_nonorientable,
    "generaldim": _scenario_general_dimension,
}


def cmd_verify(args) -> int:
    checks = _SCENARIOS[args.example]()
    failed = 0
    for ok, description in checks:
        print(f"{'PASS' if ok else 'FAIL'}: {description}")
        if not ok:
            failed += 1
    print(f"{args.example}: {len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFICATION


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbichar",
        description="Exact characteristic computations for closed 2-orbifolds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    chi = sub.add_parser("chi", help="characteristic values of a signature")
    chi.add_argument("--sig", required=True, help="signature: file, JSON, or Sigma_g(m1,m2,...)")
    mode = chi.add_mutually_exclusive_group()
    mode.add_argument("--gamma", help='group spec: "Z^l", "Z^l+Z/d", "F_k", "trivial"')
    mode.add_argument("--l", type=int, help="level of the Z^l characteristic")
    mode.add_argument("--seq-len", type=int, help="emit the sequence of levels 0..L")
    chi.add_argument("--json", action="store_true", help="wrap output in JSON")
    chi.set_defaults(func=cmd_chi)

    construct = sub.add_parser("construct", help="build a verified collision family")
    construct.add_argument("--L", dest="level", type=int, required=True)
    construct.add_argument("--g", dest="genus", type=int, required=True)
    construct.add_argument("--orders", required=True, help="comma-separated seeds >= 2")
    construct.add_argument("--N", dest="members", type=int, help="family size (default: the pair)")
    construct.add_argument("--equalize", choices=("lcm", "product"), default="lcm")
    construct.set_defaults(func=cmd_construct)

    rec = sub.add_parser("reconstruct", help="invert a characteristic sequence")
    rec.add_argument("--seq", required=True, help='comma-separated rationals "v0,v1,..."')
    rec.set_defaults(func=cmd_reconstruct)

    enum = sub.add_parser("enumerate", help="stream all signatures with a given chi_es")
    enum.add_argument("--chi-es", dest="chi_es", required=True, help='target value "p/q"')
    enum.set_defaults(func=cmd_enumerate)

    search = sub.add_parser("search", help="brute-force collision groups in a window")
    search.add_argument("--g-max", dest="genus_max", type=int, required=True)
    search.add_argument("--k-max", dest="count_max", type=int, required=True)
    search.add_argument("--m-max", dest="order_max", type=int, required=True)
    search.add_argument("--L", dest="level", type=int, required=True)
    search.set_defaults(func=cmd_search)

    quotient = sub.add_parser("quotient", help="sector sum for a finite quotient")
    quotient.add_argument("--group", required=True, help='group name ("C6", "D10") or JSON file')
    quotient.add_argument("--fpc", required=True, help="fixed-point data JSON file")
    quotient.add_argument("--gamma", required=True, help="group spec")
    quotient.add_argument("--json", action="store_true", help="wrap output in JSON")
    quotient.set_defaults(func=cmd_quotient)

    verify = sub.add_parser(
        "verify-paper", help="check the built-in published reference values"
    )
    verify.add_argument("example", choices=sorted(_SCENARIOS))
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_OK
    except (GammaSupportError, HomBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_GAMMA
    except ConstructionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except InvalidSequenceError as exc:
        print(f"error: not a valid characteristic sequence: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
