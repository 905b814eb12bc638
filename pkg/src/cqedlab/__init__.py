"""cqedlab: grid-based laboratory for cavity QED in the length gauge.

Exact correlated references (two-site dimer, 1D soft-Coulomb helium, and the
four-coordinate dressed-pair space), the dressed Kohn-Sham propagator with the
mean-field-exchange family of approximations, the standard cavity Kohn-Sham
scheme, and residual diagnostics tied together by a small CLI.
"""

__version__ = "0.1.0"

from .grids import Grid1D, ProductGrid, integrate, laplacian_apply, make_uniform_grid
from .models import (InteractionFlags, ModelSystem, make_helium_model,
                     make_two_site_model, soft_coulomb_tables)
from .transform import dressing_matrix, embed_dressed, reduce_dressed_density

__all__ = [
    "Grid1D", "ProductGrid", "integrate", "laplacian_apply", "make_uniform_grid",
    "InteractionFlags", "ModelSystem", "make_helium_model", "make_two_site_model",
    "soft_coulomb_tables", "dressing_matrix", "embed_dressed", "reduce_dressed_density",
    "__version__",
]
