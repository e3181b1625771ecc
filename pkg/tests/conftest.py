import pytest

from twrc_ldpc import SimConfig, build_context, build_generator, peg_construct


@pytest.fixture(scope="session")
def code256():
    h = peg_construct(256, 3, 6, seed=5)
    return h, build_generator(h)


@pytest.fixture(scope="session")
def code1024():
    h = peg_construct(1024, 3, 6, seed=2)
    return h, build_generator(h)


@pytest.fixture(scope="session")
def code4096():
    # shared with the harness cache so the big code is built once per run
    ctx = build_context(SimConfig())
    return ctx.h, ctx.g


@pytest.fixture(scope="session")
def tiny_code():
    # full-rank 6x12 instance: k = 6 keeps exhaustive pair search cheap
    h = peg_construct(12, 3, 6, seed=0)
    g = build_generator(h)
    assert g.k == 6
    return h, g
