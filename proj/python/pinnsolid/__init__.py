"""Physics-informed neural-network solver for linear elastostatics.

The heavy lifting lives in the C++ extension ``pinnsolid._core``. When the
package is installed the extension sits next to this file; in a CMake build
tree, point ``PINNSOLID_EXT_DIR`` at the directory containing the built
module and this package will pick it up.
"""

import os

_ext_dir = os.environ.get("PINNSOLID_EXT_DIR")
if _ext_dir and _ext_dir not in __path__:
    __path__.append(_ext_dir)

from ._core import (  # noqa: E402,F401
    LossBreakdown,
    Material,
    Network,
    NetworkConfig,
    NetworkSet,
    PointDerivatives,
    Problem,
    eval_with_input_derivatives,
    init_network,
    load_network,
    make_problem,
    minimize,
    problem_names,
    rms_error,
    save_network,
    solve,
    strain_from_gradient,
    stress_from_strain,
    traction,
    verify,
)

__version__ = "0.1.0"
