"""Arrival location over live cluster envelopes."""

import random

import pytest

from highwayhull.frontier import ContractViolationError, EnvelopeEntry, Frontier
from highwayhull.metric import (
    INF,
    MetricParams,
    Point,
    highway_time,
    in_walking_region,
    lp_distance,
)
from highwayhull.oracle import _edge_region_margin

GUARD = 1e-7


def singleton(i, pt, m):
    e = EnvelopeEntry(i)
    if m.p == 1.0 or m.p == INF:
        e.right_corner = pt
    else:
        e.chain = [pt]
        e.t_idx = 0
    e.left_x = e.right_x = pt.x
    e.ymax = pt.y
    return e


def pair_margin(q, g, m):
    hw = highway_time(q, g, m)
    if hw is None:
        return -INF  # overlap keeps the pair inside regardless of perturbation
    return lp_distance(q, g, m.p) - hw


def test_out_of_order_arrivals_rejected():
    f = Frontier(MetricParams.make(2.0, 2.0))
    assert f.locate(Point(5.0, 1.0)) is None
    assert f.locate(Point(5.0, 2.0)) is None  # equal abscissa allowed
    with pytest.raises(ContractViolationError):
        f.locate(Point(3.0, 1.0))


def test_piece_accounting():
    m = MetricParams.make(2.0, 2.0)
    f = Frontier(m)
    for i, x in enumerate((0.0, 1.0, 2.0)):
        f.append(singleton(i, Point(x, 1.0), m))
    assert f.pieces_created == 3 and f.pieces_discarded == 0
    f.update(singleton(3, Point(2.0, 1.0), m), replaced=2)
    assert f.pieces_created == 4 and f.pieces_discarded == 2
    f.note_pieces(created=5, discarded=1)
    assert f.pieces_created == 9 and f.pieces_discarded == 3
    assert len(f.pieces()) == 2


def test_prefix_maxima_track_heights():
    m = MetricParams.make(2.0, 2.0)
    f = Frontier(m)
    for i, (x, y) in enumerate(((0.0, 4.0), (1.0, 1.0), (2.0, 2.0))):
        f.append(singleton(i, Point(x, y), m))
    assert [e.pmax_y for e in f.live] == [4.0, 4.0, 4.0]


def test_locate_matches_naive_scan_over_singletons():
    rng = random.Random(5)
    for p in (1.0, 1.3, 2.0, 3.0, INF):
        for v in (1.1, 2.0, 5.0, INF):
            m = MetricParams.make(p, v)
            f = Frontier(m)
            xs = sorted(rng.uniform(-40.0, 40.0) for _ in range(30))
            pts = [Point(x, rng.uniform(0.0, 8.0)) for x in xs]
            for i, pt in enumerate(pts):
                f.append(singleton(i, pt, m))
            queries = sorted(
                (Point(rng.uniform(40.0, 90.0), rng.uniform(0.0, 10.0)) for _ in range(40)),
                key=lambda q: q.x,
            )
            for q in queries:
                margins = [pair_margin(q, g, m) for g in pts]
                if min(abs(x) for x in margins) < GUARD:
                    continue
                want = next((i for i, x in enumerate(margins) if x <= 0.0), None)
                assert f.locate(q) == want, (p, v, q)


def test_falling_edge_band_agrees_with_exhaustive_region_test():
    rng = random.Random(20)
    hi, lo = Point(0.0, 5.0), Point(4.0, 1.0)
    for p, v in ((1.3, 2.0), (2.0, 2.0), (3.0, 5.0), (7.0, 1.5), (2.0, 100.0)):
        m = MetricParams.make(p, v)
        e = EnvelopeEntry(0)
        e.chain = [hi, lo]
        e.t_idx = 0
        e.left_x, e.right_x, e.ymax = hi.x, lo.x, hi.y
        f = Frontier(m)
        f.append(e)
        queries = sorted(
            (Point(rng.uniform(4.0, 30.0), rng.uniform(0.0, 12.0)) for _ in range(150)),
            key=lambda q: q.x,
        )
        for q in queries:
            vertex_margins = [pair_margin(q, g, m) for g in (hi, lo)]
            edge_hit, edge_margin = _edge_region_margin(q, (hi, lo), m)
            if min(abs(x) for x in vertex_margins) < GUARD or edge_margin < GUARD:
                continue
            want = any(x <= 0.0 for x in vertex_margins) or edge_hit
            assert (f.locate(q) == 0) == want, (p, v, q)
