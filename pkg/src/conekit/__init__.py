"""conekit: exact exterior-algebra toolkit for special-holonomy structures
on circle bundles over conical Calabi-Yau threefolds.

Subpackages cover pointwise SU(3)/SU(2)-structure algebra, the assembled
7-dimensional positive 3-forms and their first-order systems, symbolic cone
calculus over a Sasaki-Einstein link, indicial-root bookkeeping for the cone
operators, cohomological admissibility of circle bundles, and the formal
power-series recursion with its majorant certificates.
"""

from .scalars import Scalar, is_exact, frac_pow, sqrt_scalar
from .forms import (Form, wedge, wedge_power, contract, hodge, form_inner,
                    forms_close, form_to_json, form_from_json)
from .polyforms import (Poly, poly_form, poly_d, poly_codiff, poly_laplacian,
                        const_coeffs, eval_form, euler_vector,
                        polyform_to_json, polyform_from_json)
from .su3 import (SU3Structure, StabilityError, StructureError,
                  standard_omega, standard_re_omega, standard_im_omega,
                  standard_su3, su3_structure, stability_invariant,
                  hitchin_dual, linearized_dual, decompose2, decompose3,
                  torsion_classes, primitive_11_basis, j_oneform_flat,
                  su3_curl, dirac_forms)
from .g2 import (ASData, ASDerivatives, NotPositiveError, as_residual,
                 assemble_s1_invariant, cy_monopole_residual, embed6,
                 restrict7, lift_to_product, vector_wave_operator, g2_metric)
from .cone import (LinkAlgebra, LinkExpr, EigenformSymbol, SymbolAlgebraError,
                   SU2Structure, sasaki_einstein_structure,
                   generic_su2_structure, se_residual, link_d, link_star,
                   link_codiff, link_laplacian, link_wedge, ConeForm,
                   cone_d, cone_hodge, cone_codiff, cone_wedge,
                   cone_laplacian, conical_cy, conical_su3_residuals,
                   HarmonicComponent, ClassifyError,
                   classify_homogeneous_harmonic, reconstruct_partner,
                   CartLink, cart_to_cone)
from .indicial import (SpectralLine, LinkSpectralData, SpectralDataError,
                       WindowOnRootError, OutsideTableError, IndicialRoot,
                       rate_candidates, harmonic_form_dim,
                       closed_coclosed_dim, dirac_kernel_cone,
                       gauge_kernel_dim, log_terms, indicial_set, index_jump,
                       harmonic_space_dims, slow_harmonic_2form_dim)
from .topology import (CohomologyModel, CohomologyError, CircleBundleSpec,
                       gysin_betti, gysin_betti_from_ranks, derive_cup_ranks,
                       l2_cohomology, integer_kernel_of_row, ch1_check,
                       ConeFamily, cAp_model, kp1p1_model, kp1p1_bundles)
from .series import (Jet, JetError, MajorantError, jet_pow, lift_series,
                     series_part, hitchin_Qk, SeriesState, alpha0k,
                     alpha0k_residual, rhs_assembly, gauge_residuals,
                     multiindices, exponent_condition, majorant_coefficients,
                     majorant_check, mock_iterate)
from .verify import VerifyError, row_tags, run_matrix

__version__ = "0.1.0"
