from __future__ import annotations
from .families import Family, MapInstance, conservative_h, hm1mu, hp1mu, make_map, t2mu
from .nonlinearity import Nonlinearity
from .perturbation import PerturbationSpec


def catalog_instances(M: float = 0.5) -> dict[Family, MapInstance]:
    """One small-perturbation instance per family, used by certification runs.

    Every perturbation keeps the implicit equations solvable on |x|, |y| <= 2:
    the cross-form eps is linear in its first argument and the QRexample1
    p is a cubic with u + p(u) increasing.
    """
    return {
        Family.CONSERVATIVE_H: conservative_h(M),
        Family.CROSS_FORM_TILDE_H: make_map(
            Family.CROSS_FORM_TILDE_H, M, eps=PerturbationSpec.monomials({(1, 1): 0.03, (0, 2): 0.02, (0, 1): 0.02})
        ),
        Family.TILDE_HM2: make_map(
            Family.TILDE_HM2, M, eps=PerturbationSpec.monomials({(1, 1): 0.03, (0, 2): 0.02, (2, 1): 0.01})
        ),
        Family.TILDE_H12INV: make_map(
            Family.TILDE_H12INV, M, b=1.5, eps=PerturbationSpec.monomials({(1, 1): 0.03, (1, 0): 0.02})
        ),
        Family.QR_HAT_H: make_map(
            Family.QR_HAT_H,
            M,
            eps=PerturbationSpec.monomials({(1, 1): 0.03, (0, 2): 0.02}),
            eps2=PerturbationSpec.monomials({(2, 0): 0.02, (1, 1): 0.01}),
        ),
        Family.QR_EXAMPLE1: make_map(
            Family.QR_EXAMPLE1, M, eps=PerturbationSpec.separable([0.0, 0.0, 0.0, 0.05], [0.0, 0.0, 0.0, 0.02])
        ),
        Family.QR_EXAMPLE2: make_map(
            Family.QR_EXAMPLE2, M, eps=PerturbationSpec.monomials({(0, 2): 0.03, (1, 0): 0.02})
        ),
        Family.NONORIENTABLE_HAT_HM1: MapInstance(
            Family.NONORIENTABLE_HAT_HM1,
            Nonlinearity.plus(M),
            perturbation=PerturbationSpec.monomials({(1, 1): 0.03, (2, 0): 0.02}),
        ),
        Family.T2MU: t2mu(M, 1.5, 0.03),
        Family.HM1MU: hm1mu(M, 0.03),
        Family.HP1MU: hp1mu(M, 0.03),
    }


def unperturbed_instances(M: float = 0.5) -> dict[Family, MapInstance]:
    """The same catalog with every perturbation switched off."""
    out = {}
    for fam, m in catalog_instances(M).items():
        out[fam] = MapInstance(fam, m.nonlinearity, b=m.b, mu=0.0)
    return out
