"""OFDM joint communication and sensing: comb periodogram and diagonal single-DFT sensing."""

from .echo import (MotionModel, NoiseSpec, NormalizedFrame, RadarLinkParams, TargetState,
                   propagate, received_power, relative_amplitude_db, synth_comb, synth_diagonal)
from .errors import (ConfigurationError, DomainError, JcasError, NoTargetError,
                     NoValidEstimateError, PredictionInfeasibleError, TargetPassedAntennaError,
                     UnsupportedSizeError)
from .estimator import (CandidatePair, PeakSet, RangeVelocityEstimate, detect_peaks,
                        estimate_2d, estimate_diagonal, spectrum_export)
from .fusion import (Hypothesis, Measurement, PredictedImage, TrackVerdict, infeasible_filter,
                     predict, resolve, score)
from .grid import SensingAllocation, comb_allocation, diagonal_allocation, overhead
from .sysconfig import (DerivedGrid, SensingKpis, SystemParams, check_kpis, derive_grid,
                        max_range, max_velocity, range_resolution, velocity_resolution)
from .transforms import count_ops, dft, idft, periodogram_2d

__version__ = "0.1.0"
