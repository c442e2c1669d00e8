import random
from fractions import Fraction

import pytest

from hierflow.config import DEFAULT_CONFIG
from hierflow.cut_matching import (CMGState, cut_or_embed, cut_player_bisection,
                                   rounds_budget, union_psi)
from hierflow.errors import NotStronglyConnectedError
from hierflow.graph import build_graph
from hierflow.hierarchy import Hierarchy

from helpers import exhaustive_sparsest_cut

NO_EARLY = DEFAULT_CONFIG.with_(cmg_early_exit=False)


def _complete_digraph(n, cap=1):
    arcs = [(u, v, cap) for u in range(n) for v in range(n) if u != v]
    return build_graph(n, arcs)


def _dumbbell(k=4, bridge=1):
    arcs = []
    for a in range(k):
        for b in range(k):
            if a != b:
                arcs.append((a, b, 1))
    for a in range(k, 2 * k):
        for b in range(k, 2 * k):
            if a != b:
                arcs.append((a, b, 1))
    arcs.append((k - 1, k, bridge))
    arcs.append((2 * k - 1, 0, bridge))
    return build_graph(2 * k, arcs)


def _empty_hier(n):
    return Hierarchy(set(), [], list(range(1, n + 1)))


def test_bisection_two_uniform_vertices():
    state = CMGState([1, 1], random.Random(0), 4)
    nu_a, nu_b = cut_player_bisection(state)
    assert sorted([sum(nu_a), sum(nu_b)]) == [1, 1]
    assert all(a + b <= n for a, b, n in zip(nu_a, nu_b, state.nu))


def test_bisection_excludes_zero_weight_vertex():
    state = CMGState([2, 0, 2], random.Random(1), 4)
    nu_a, nu_b = cut_player_bisection(state)
    assert nu_a[1] == 0 and nu_b[1] == 0
    assert sum(nu_a) <= sum(nu_b)


def test_bisection_contract_over_rounds():
    rng = random.Random(2)
    nu = [rng.randint(0, 5) for _ in range(9)]
    state = CMGState(nu, rng, 6)
    for _ in range(6):
        nu_a, nu_b = cut_player_bisection(state)
        assert all(a + b <= x for a, b, x in zip(nu_a, nu_b, nu))
        assert sum(nu_a) <= sum(nu_b)
        # fake a matching that routes everything from A to B
        act_a = [v for v in range(9) if nu_a[v] > 0]
        act_b = [v for v in range(9) if nu_b[v] > 0]
        matching = []
        if act_a and act_b:
            matching = [(act_a[0], act_b[0], sum(nu_a))]
        from hierflow.cut_matching import absorb_matching

        absorb_matching(state, matching)


def test_tiny_volume_certifies_without_rounds():
    g, caps = _complete_digraph(3)
    hier = _empty_hier(3)
    out = cut_or_embed(g, caps, {0}, Fraction(1, 16), 0, hier,
                       random.Random(3), NO_EARLY)
    assert out.cut is None
    assert out.certificate.rounds == 0
    assert out.certificate.early


def test_requires_strong_connectivity():
    g, caps = build_graph(3, [(0, 1, 1), (1, 2, 1)])
    with pytest.raises(NotStronglyConnectedError):
        cut_or_embed(g, caps, {0, 1}, Fraction(1, 16), 0, _empty_hier(3),
                     random.Random(0))


def test_complete_digraph_certifies_and_is_truly_expanding():
    g, caps = _complete_digraph(8)
    f_edges = set(range(g.m))
    out = cut_or_embed(g, caps, f_edges, Fraction(1, 16), 0, _empty_hier(8),
                       random.Random(5))
    assert out.cut is None
    # exhaustive confirmation that no 1/16-sparse cut exists
    edges = [(g.tails[e], g.heads[e], caps[e]) for e in range(g.m)]
    volw = {v: 14 for v in range(8)}
    ratio, _ = exhaustive_sparsest_cut(range(8), edges, volw)
    assert ratio >= Fraction(1, 16)


def test_dumbbell_returns_sparse_cut_with_contract():
    g, caps = _dumbbell(4, 1)
    f_edges = set(range(g.m))
    phi = Fraction(1, 16)
    out = cut_or_embed(g, caps, f_edges, phi, 0, _empty_hier(8),
                       random.Random(7))
    assert out.cut is not None
    side = set(out.cut)
    assert side in (set(range(4)), set(range(4, 8)))
    assert min(out.boundary_out, out.boundary_in) * phi.denominator \
        < phi.numerator * out.vol_f_side
    assert 2 * out.vol_f_side <= out.vol_f_total


def test_dumbbell_pure_game_outcome_is_sound():
    # at congestion kappa = ceil(2/phi) the bisections may legitimately
    # route across the bridge, so the pure game can only promise the weak
    # phi*psi^2/2 bound; whatever branch it takes must honor its contract
    g, caps = _dumbbell(4, 1)
    f_edges = set(range(g.m))
    phi = Fraction(1, 16)
    out = cut_or_embed(g, caps, f_edges, phi, 0, _empty_hier(8),
                       random.Random(11), NO_EARLY)
    edges = [(g.tails[e], g.heads[e], caps[e]) for e in range(g.m)]
    volw = {v: 0 for v in range(8)}
    for u, v, c in edges:
        volw[u] += c
        volw[v] += c
    if out.cut is None:
        psi = out.certificate.psi_measured
        ratio, _ = exhaustive_sparsest_cut(range(8), edges, volw)
        assert ratio is not None and ratio < phi  # the bridge cut is real
        if psi:
            assert ratio >= phi * psi * psi / 2  # but the weak claim holds
    else:
        assert min(out.boundary_out, out.boundary_in) * phi.denominator \
            < phi.numerator * out.vol_f_side
        assert 2 * out.vol_f_side <= out.vol_f_total


def test_full_game_union_expands_on_complete_digraph():
    g, caps = _complete_digraph(6)
    f_edges = set(range(g.m))
    out = cut_or_embed(g, caps, f_edges, Fraction(1, 16), 0, _empty_hier(6),
                       random.Random(13), NO_EARLY)
    assert out.cut is None
    cert = out.certificate
    assert not cert.early
    assert cert.rounds == rounds_budget(6, [10] * 6, NO_EARLY)
    # the matching union is strongly connected with positive expansion
    assert cert.psi_measured is not None and cert.psi_measured > 0


def test_certificate_soundness_seeded_sample():
    # R = 0 certificates never coexist with a phi*psi^2/2-sparse cut
    rng = random.Random(17)
    certs = cuts = 0
    for trial in range(40):
        n = rng.randint(4, 10)
        arcs = [(i, (i + 1) % n, rng.randint(1, 2)) for i in range(n)]
        for _ in range(rng.randint(0, 2 * n)):
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v:
                arcs.append((u, v, 1))
        g, caps = build_graph(n, arcs)
        f_edges = set(range(g.m))
        phi = Fraction(1, 16)
        out = cut_or_embed(g, caps, f_edges, phi, 0, _empty_hier(n),
                           random.Random(1000 + trial))
        edges = [(g.tails[e], g.heads[e], caps[e]) for e in range(g.m)]
        volw = {v: 0 for v in range(n)}
        for u, v, c in edges:
            volw[u] += c
            volw[v] += c
        if out.cut is None:
            certs += 1
            psi = out.certificate.psi_measured
            if psi:
                threshold = phi * psi * psi / 2
                ratio, _ = exhaustive_sparsest_cut(range(n), edges, volw)
                assert ratio is None or ratio >= threshold
        else:
            cuts += 1
            side = set(out.cut)
            vol_s = sum(volw[v] for v in side)
            assert vol_s == out.vol_f_side
            assert 2 * vol_s <= sum(volw.values())
    assert certs > 0
