import numpy as np
import pytest

import cablecycle as cc


SQUARE_ATTACHMENTS = np.array(
    [[0.0, 1.2, 0.0], [-1.2, 0.0, 0.0], [0.0, -1.2, 0.0], [1.2, 0.0, 0.0]]
)


def make_load(attachments, mass=1.0, inertia_diag=0.01, **kwargs):
    return cc.LoadModel(
        mass=mass,
        inertia=inertia_diag * np.eye(3),
        attachments=np.asarray(attachments, dtype=float),
        **kwargs,
    )


def sampled_load(n, seed, **kwargs):
    att = cc.sample_attachments(cc.AttachmentSampler(n=n, seed=seed))
    return make_load(att, **kwargs)


@pytest.fixture(scope="session")
def square_load():
    return make_load(SQUARE_ATTACHMENTS)


@pytest.fixture(scope="session")
def triangle_load():
    r = 1.2
    angles = [np.pi / 2 + 2 * np.pi * k / 3 for k in range(3)]
    att = [[r * np.cos(a), r * np.sin(a), 0.0] for a in angles]
    return make_load(att)


def plan_battery():
    """Admissible plans across sizes, libraries, and parameters.

    Used by the acceptance criteria that quantify over "all battery plans".
    """
    plans = []
    square = make_load(SQUARE_ATTACHMENTS)
    for cycle in cc.enumerate_cycles(4):
        plans.append(cc.build_plan(square, cycle, cc.color_edges(cycle)))
    tri = make_load(
        [[1.2 * np.cos(a), 1.2 * np.sin(a), 0.0] for a in (0.3, 2.5, 4.4)]
    )
    tri_cycle = cc.enumerate_cycles(3)[0]
    plans.append(cc.build_plan(tri, tri_cycle, cc.color_edges(tri_cycle)))

    five = sampled_load(5, seed=7)
    cycles5 = cc.enumerate_cycles(5)
    for cycle in cycles5[::4]:
        plans.append(cc.build_plan(five, cycle, cc.color_edges(cycle, "universal")))
    plans.append(cc.build_plan(five, cycles5[1], cc.color_edges(cycles5[1], "minimal")))

    six = sampled_load(6, seed=11)
    for cycle in cc.enumerate_cycles(6)[::23]:
        plans.append(cc.build_plan(six, cycle, cc.color_edges(cycle, "minimal")))

    # parameter variations on the square perimeter cycle
    perim = cc.HamiltonianCycle((1, 2, 3, 4))
    plans.append(cc.build_plan(square, perim, cc.color_edges(perim), amplitude=0.5, xi=4.0))
    plans.append(
        cc.build_plan(square, perim, cc.color_edges(perim, "universal"), lengths=1.5)
    )
    return plans


@pytest.fixture(scope="session")
def battery():
    return plan_battery()
