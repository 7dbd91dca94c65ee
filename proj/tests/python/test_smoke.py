"""Smoke tests for the python bindings: exercise every exposed surface once."""

import numpy as np
import pytest

import gftse


def test_version():
    assert gftse.__version__


def test_synth_and_mix():
    clean = gftse.synth_signal("sine", duration=0.25, sample_rate=8000.0, freq=500.0)
    noise = gftse.synth_signal("white-noise", duration=0.25, sample_rate=8000.0, seed=4)
    assert clean.shape == (2000,)
    assert abs(np.abs(clean).max() - 0.5) < 1e-12

    noisy, gain = gftse.mix_at_snr(clean, noise, snr_db=0.0, sample_rate=8000.0)
    scaled = gain * noise
    measured = 10.0 * np.log10((clean**2).mean() / (scaled**2).mean())
    assert abs(measured) < 1e-9
    np.testing.assert_allclose(noisy, clean + scaled, rtol=0, atol=1e-15)


def test_wav_roundtrip(tmp_path):
    x = gftse.synth_signal("chirp", duration=0.1, sample_rate=8000.0, f0=100, f1=2000)
    x = x.astype(np.float32).astype(np.float64)  # quantize to what the file stores
    path = str(tmp_path / "x.wav")
    gftse.write_wav(path, x, sample_rate=8000.0, format="float32")
    back, rate = gftse.read_wav(path)
    assert rate == 8000.0
    np.testing.assert_array_equal(back, x)


def test_topology_and_svd():
    w = gftse.build_shift_operator(8, 3)
    assert w.sum() == 24.0
    assert gftse.sparsity_to_k(0.01, 512) == 5

    topo = gftse.LearnableTopology(16, 3, init="uniform", seed=11)
    adj = topo.adjacency()
    np.testing.assert_allclose(adj.sum(axis=1), np.ones(16), atol=1e-12)
    assert np.all(adj[gftse.build_shift_operator(16, 3) == 0.0] == 0.0)

    basis = gftse.svd(adj)
    recon = basis.psi @ np.diag(basis.sigma) @ basis.gamma
    assert np.abs(recon - adj).max() < 1e-9
    assert np.abs(basis.psi.T @ basis.psi - np.eye(16)).max() < 1e-9
    assert np.all(np.diff(basis.sigma) <= 1e-15)


def test_transform_roundtrip():
    x = gftse.synth_signal("white-noise", duration=0.2, sample_rate=8000.0, seed=3)
    frames = gftse.frame_signal(x, 8000.0, frame_len=64, hop=16, pad_to=64)
    adj = gftse.fixed_adjacency(64, 5)
    basis = gftse.svd(adj)
    spec = gftse.gft_svd_forward(frames, basis)
    assert spec.data.shape == (frames.num_frames, 64)
    back = gftse.gft_svd_inverse(spec, basis)
    assert np.abs(back - frames.frames).max() < 1e-10

    rec = gftse.overlap_add(frames)
    lo, hi = 64 - 16, frames.num_frames * 16
    np.testing.assert_allclose(rec[lo:hi], x[lo:hi], atol=1e-10)

    stft = gftse.stft_forward(frames)
    energy_in = (frames.frames**2).sum(axis=1)
    energy_out = (np.abs(stft) ** 2).sum(axis=1)
    np.testing.assert_allclose(energy_in, energy_out, rtol=1e-10)


def test_circulant_evd():
    u, lam = gftse.circulant_evd(4, 1)
    roots = sorted(np.round(lam, 12).tolist(), key=lambda z: (z.real, z.imag))
    expected = sorted([1, 1j, -1, -1j], key=lambda z: (z.real, z.imag))
    assert np.allclose(roots, expected)
    assert np.abs(u.conj().T @ u - np.eye(4)).max() < 1e-12


def test_si_sdr():
    ref = gftse.synth_signal("sine", duration=0.1, sample_rate=8000.0, freq=700)
    est = ref + 0.01 * gftse.synth_signal("white-noise", duration=0.1,
                                          sample_rate=8000.0, seed=8)
    base = gftse.si_sdr(est, ref)
    assert abs(gftse.si_sdr(3.0 * est, ref) - base) < 1e-9
    assert gftse.si_sdr(ref, ref) >= 100.0

    grad = gftse.si_sdr_gradient(est, ref)
    assert abs(float(grad @ est)) < 1e-9 * max(1.0, np.linalg.norm(grad) * np.linalg.norm(est))

    with pytest.raises(gftse.InvalidArgumentError):
        gftse.si_sdr(est[:-1], ref)


def test_train_inverse():
    x = gftse.synth_signal("white-noise", duration=0.3, sample_rate=8000.0, seed=5)
    frames = gftse.frame_signal(x, 8000.0, frame_len=32, hop=8, pad_to=32)
    basis = gftse.svd(gftse.fixed_adjacency(32, 3))
    b, report = gftse.train_inverse(frames, basis, method="least-squares", ridge=1e-6)
    assert report["final_db"] >= 40.0
    assert b.shape == (32, 32)


def test_enhance_improves_noisy_speech():
    clean = gftse.synth_signal("sine", duration=0.25, sample_rate=8000.0, freq=450)
    noise = gftse.synth_signal("white-noise", duration=0.25, sample_rate=8000.0, seed=2)
    noisy, _ = gftse.mix_at_snr(clean, noise, snr_db=0.0, sample_rate=8000.0)

    enhanced, metrics = gftse.enhance(noisy, clean, sample_rate=8000.0,
                                      transform="gft-svd", p=0.05,
                                      frame_len=64, hop=16, pad_to=64)
    assert enhanced.shape == noisy.shape
    assert metrics["si_sdr_improvement"] > 0.0

    scored = gftse.evaluate(enhanced, clean, noisy, sample_rate=8000.0)
    assert scored["si_sdr_improvement"] == pytest.approx(
        scored["si_sdr_enhanced"] - scored["si_sdr_noisy"])


def test_train_topology_monotone():
    clean = gftse.synth_signal("sine", duration=0.1, sample_rate=8000.0, freq=620)
    noise = gftse.synth_signal("white-noise", duration=0.1, sample_rate=8000.0, seed=6)
    noisy, _ = gftse.mix_at_snr(clean, noise, snr_db=0.0, sample_rate=8000.0)
    theta, report = gftse.train_topology(clean, noisy, sample_rate=8000.0, n=16, k=2,
                                         frame_len=16, hop=4, max_iters=3)
    trace = report["trace_db"]
    assert all(b >= a for a, b in zip(trace, trace[1:]))
    assert theta.shape == (32,)


def test_compare_transforms_rows():
    rows = gftse.compare_transforms(mixtures=2, duration=0.25, sample_rate=8000.0,
                                    p_list=[0.01, 1.0], transforms=["stft", "gft-svd"],
                                    frame_len=64, hop=16, pad_to=64)
    assert len(rows) == 4
    assert rows[0]["transform"] == "stft"
    svd_rows = [r for r in rows if r["transform"] == "gft-svd"]
    assert all(r["improvement"] > 0.0 for r in svd_rows)
