import random

import pytest

from ordlab.groups import (
    FiniteCyclic,
    FreeAbelian,
    FreeGroup,
    KleinBottle,
    sanov_semidirect,
)
from ordlab.orders import (
    functional_lex_zn,
    klein_bottle_order,
    lex_zn,
    magnus_free,
    standard_sanov_order,
)

SEED = 20259


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture(scope="session")
def shipped_orders():
    """Every library order on its backend; the sweep suites iterate these."""
    z1 = FreeAbelian(1)
    z2 = FreeAbelian(2)
    f2 = FreeGroup(2)
    kb = KleinBottle()
    sd = sanov_semidirect()
    return [
        ("z_standard", lex_zn(z1)),
        ("z2_lex", lex_zn(z2)),
        ("z2_functional_23", functional_lex_zn(z2, (2, 3))),
        ("f2_magnus", magnus_free(f2)),
        ("klein_b_dominant", klein_bottle_order(kb)),
        ("klein_reversed", klein_bottle_order(kb).reverse()),
        ("sanov_lex_extension", standard_sanov_order(sd)),
    ]
