"""Limb-vectorized BLS12-377 point addition, Pippenger MSM and a
VLIW tile-array cost model."""

from .params import CurveParams, bls12_377
from .oracle import AffinePoint, generator, mod_mul_ref, msm_ref, padd_ref
from .barrett import BarrettParams, make_params, modmul, modmul_coarse
from .curve import (ExtPoint, InputPoint, PaddContext, complete_padd,
                    make_context, mixed_padd, to_affine)
from .msm import MsmConfig, schedule_accumulation
from .mapping import (MappingSpec, MetricsReport, builtin_spec,
                      carry_bandwidth_analysis, compute_metrics,
                      table1_metrics, validate)

__version__ = "0.1.0"
