"""Graph-spectral speech enhancement toolkit.

Thin Python layer over the C++ core: learnable graph topologies, the
SVD-based graph Fourier transform, oracle-mask enhancement pipelines and
SI-SDR metrics.
"""

from ._core import (
    FrameSequence,
    GraphBasis,
    InvalidArgumentError,
    IoError,
    LearnableTopology,
    NumericError,
    TimeGraphSpectrum,
    __version__,
    build_shift_operator,
    circulant_evd,
    compare_transforms,
    dft_matrix,
    enhance,
    evaluate,
    fixed_adjacency,
    frame_signal,
    gft_svd_forward,
    gft_svd_inverse,
    mix_at_snr,
    overlap_add,
    read_wav,
    si_sdr,
    si_sdr_gradient,
    sparsity_to_k,
    stft_forward,
    svd,
    synth_signal,
    train_inverse,
    train_topology,
    write_wav,
)

__all__ = [
    "FrameSequence",
    "GraphBasis",
    "InvalidArgumentError",
    "IoError",
    "LearnableTopology",
    "NumericError",
    "TimeGraphSpectrum",
    "__version__",
    "build_shift_operator",
    "circulant_evd",
    "compare_transforms",
    "dft_matrix",
    "enhance",
    "evaluate",
    "fixed_adjacency",
    "frame_signal",
    "gft_svd_forward",
    "gft_svd_inverse",
    "mix_at_snr",
    "overlap_add",
    "read_wav",
    "si_sdr",
    "si_sdr_gradient",
    "sparsity_to_k",
    "stft_forward",
    "svd",
    "synth_signal",
    "train_inverse",
    "train_topology",
    "write_wav",
]
