"""Cayley configuration spaces of Euclidean distance constraint systems."""

from .characterize import (CharacterizationReport, SingleIntervalVerdict, admits_efficient_space,
                           check_parameter_set, check_parameter_set_interval, single_interval_nonedge,
                           subdivide_for_intervals, universal_inherence)
from .decompose import minimal_components, minimal_components_containing, two_sum_decompose
from .edcs import Edcs
from .errors import CayleyError, CharacterizationError, InfeasibleError, InputError
from .graph import K5, K222, ContractionSequence, Graph, contract_edge, pair
from .laman import LamanTag, laman_classify
from .minors import complete_to_k_tree, has_minor, is_partial_k_tree, is_partial_two_tree, is_three_realizable
from .oracle import IntervalSet, cayley_space_oracle, cluster, realizability_probe
from .polytope import CayleyPolytope, Inequality, polytope_description, project_out_auxiliary, sample
from .realize import (Realization, enumerate_branches, realize_from_config, realize_k_tree,
                      verify_realization)
from .reductions import contraction_reduction_to_k5_or_k222, restricted_contraction_reduction
from .witness import base_case_witness_2d, k5_witness_3d, k222_witness_3d, three_d_witness

__version__ = "0.1.0"
