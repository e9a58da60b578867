from .point import Point2, array_to_points, points_to_array
from .nonlinearity import Nonlinearity, NonlinearityKind
from .perturbation import PerturbationForm, PerturbationSpec
from .families import Family, MapInstance, conservative_h, hm1mu, hp1mu, make_map, t2mu
from .solver import (
    cross_form_factor,
    differential,
    image_residual,
    iterate,
    jacobian_analytic,
    jacobian_fd,
    step,
    step_inverse,
    step_many,
)
from .catalog import catalog_instances

__all__ = [
    "Point2",
    "array_to_points",
    "points_to_array",
    "Nonlinearity",
    "NonlinearityKind",
    "PerturbationForm",
    "PerturbationSpec",
    "Family",
    "MapInstance",
    "conservative_h",
    "hm1mu",
    "hp1mu",
    "make_map",
    "t2mu",
    "cross_form_factor",
    "differential",
    "image_residual",
    "iterate",
    "jacobian_analytic",
    "jacobian_fd",
    "step",
    "step_inverse",
    "step_many",
    "catalog_instances",
]
