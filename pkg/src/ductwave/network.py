"""Small fully connected network with exact spatial derivatives.

The network maps a scalar position to two outputs (real and imaginary field
channels) through ``layers - 1`` hidden layers with sine activation and a
linear output layer. Because the input is one-dimensional, the first and
second spatial derivatives are propagated exactly through every layer as a
truncated Taylor jet (value, d/dx, d2/dx2) alongside the forward pass; this
is cheap, exact, and avoids nested reverse-mode.

Gradients of a scalar loss with respect to every weight and bias are computed
by reverse-mode over the jet propagation: the caller supplies the loss and its
partial derivatives with respect to the network's jet outputs, and
``loss_and_param_gradient`` backpropagates those through the cached forward
state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiniteLoss

ACTIVATIONS = ("sine", "tanh")

_CHECKPOINT_MAGIC = "ductwave-network-checkpoint"
_CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class NetworkArchitecture:
    """Shape of the field network.

    ``layers`` counts weight layers (hidden plus output), so ``layers = m``
    means ``m - 1`` hidden layers of ``width`` neurons followed by a linear
    map to ``output_dim`` values. ``input_scale`` multiplies the raw input
    before the first layer; leave it at 1.0 when the domain is already O(1)
    and set it to 1/L for longer ducts.
    """

    layers: int
    width: int
    input_dim: int = 1
    output_dim: int = 2
    activation: str = "sine"
    input_scale: float = 1.0

    def __post_init__(self):
        if self.layers < 2:
            raise ValueError("need at least one hidden layer plus the linear output")
        if self.width < 1 or self.input_dim < 1 or self.output_dim < 1:
            raise ValueError("layer widths must be positive")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")
        if not np.isfinite(self.input_scale) or self.input_scale == 0.0:
            raise ValueError("input_scale must be finite and nonzero")

    def layer_shapes(self) -> list[tuple[int, int]]:
        """(fan_out, fan_in) of every weight matrix, input to output."""
        dims = [self.input_dim] + [self.width] * (self.layers - 1) + [self.output_dim]
        return [(dims[q + 1], dims[q]) for q in range(self.layers)]


@dataclass
class NetworkParameters:
    """Per-layer weight matrices and bias vectors."""

    arch: NetworkArchitecture
    weights: list = field(default_factory=list)
    biases: list = field(default_factory=list)

    def __post_init__(self):
        shapes = self.arch.layer_shapes()
        if len(self.weights) != len(shapes) or len(self.biases) != len(shapes):
            raise ValueError("parameter list length does not match the architecture")
        for (W, b, shape) in zip(self.weights, self.biases, shapes):
            if W.shape != shape or b.shape != (shape[0],):
                raise ValueError(f"parameter shape {W.shape}/{b.shape} does not match {shape}")

    @property
    def n_params(self) -> int:
        return sum(W.size + b.size for W, b in zip(self.weights, self.biases))

    def to_flat(self) -> np.ndarray:
        """Flatten every W (row-major) then b, in layer order."""
        parts = []
        for W, b in zip(self.weights, self.biases):
            parts.append(W.ravel())
            parts.append(b)
        return np.concatenate(parts)

    @classmethod
    def from_flat(cls, arch: NetworkArchitecture, flat: np.ndarray) -> "NetworkParameters":
        flat = np.asarray(flat, dtype=float)
        weights, biases = [], []
        pos = 0
        for (rows, cols) in arch.layer_shapes():
            weights.append(flat[pos : pos + rows * cols].reshape(rows, cols).copy())
            pos += rows * cols
            biases.append(flat[pos : pos + rows].copy())
            pos += rows
        if pos != flat.size:
            raise ValueError(f"flat vector has {flat.size} entries, architecture needs {pos}")
        return cls(arch=arch, weights=weights, biases=biases)

    def copy(self) -> "NetworkParameters":
        return NetworkParameters(
            arch=self.arch,
            weights=[W.copy() for W in self.weights],
            biases=[b.copy() for b in self.biases],
        )

    def save(self, path, seed: int | None = None) -> None:
        """Write a text checkpoint: a small header followed by one parameter
        per line in layer order (W row-major, then b). repr() round-trips
        float64 exactly, so load() restores bit-identical parameters."""
        a = self.arch
        lines = [
            f"{_CHECKPOINT_MAGIC} v{_CHECKPOINT_VERSION}",
            f"layers={a.layers}",
            f"width={a.width}",
            f"input_dim={a.input_dim}",
            f"output_dim={a.output_dim}",
            f"activation={a.activation}",
            f"input_scale={a.input_scale!r}",
            f"seed={'' if seed is None else seed}",
            f"count={self.n_params}",
        ]
        lines.extend(repr(float(v)) for v in self.to_flat())
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path) -> "NetworkParameters":
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines or not lines[0].startswith(_CHECKPOINT_MAGIC):
            raise ValueError(f"{path} is not a network checkpoint")
        header: dict[str, str] = {}
        body_start = 1
        for i, line in enumerate(lines[1:], start=1):
            if "=" not in line:
                body_start = i
                break
            key, _, value = line.partition("=")
            header[key] = value
            body_start = i + 1
        arch = NetworkArchitecture(
            layers=int(header["layers"]),
            width=int(header["width"]),
            input_dim=int(header["input_dim"]),
            output_dim=int(header["output_dim"]),
            activation=header["activation"],
            input_scale=float(header["input_scale"]),
        )
        count = int(header["count"])
        values = np.array([float(v) for v in lines[body_start : body_start + count]])
        if values.size != count:
            raise ValueError(f"checkpoint truncated: expected {count} values, got {values.size}")
        return cls.from_flat(arch, values)


@dataclass(frozen=True)
class NetworkJet:
    """Network output and its first two exact x-derivatives.

    Each field has shape (n_points, output_dim); for a scalar input the
    leading axis has length 1.
    """

    value: np.ndarray
    dx: np.ndarray
    dxx: np.ndarray


def init_he(arch: NetworkArchitecture, seed: int) -> NetworkParameters:
    """He initialization: zero-mean normal weights with std sqrt(2/fan_in),
    zero biases. Deterministic for a fixed seed."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for (rows, cols) in arch.layer_shapes():
        std = np.sqrt(2.0 / cols)
        weights.append(rng.normal(0.0, std, size=(rows, cols)))
        biases.append(np.zeros(rows))
    return NetworkParameters(arch=arch, weights=weights, biases=biases)


def _activation_tables(arch: NetworkArchitecture, z):
    """sigma, sigma', sigma'', sigma''' evaluated at z."""
    if arch.activation == "sine":
        s, c = np.sin(z), np.cos(z)
        return s, c, -s, -c
    t = np.tanh(z)
    d1 = 1.0 - t * t
    return t, d1, -2.0 * t * d1, d1 * (6.0 * t * t - 2.0)


def _higher_tables(arch: NetworkArchitecture, a0, a1):
    """sigma'' and sigma''' recovered from (sigma, sigma') without the
    pre-activation: both supported activations allow this in closed form."""
    if arch.activation == "sine":
        return -a0, -a1
    return -2.0 * a0 * a1, a1 * (6.0 * a0 * a0 - 2.0)


def _forward(params: NetworkParameters, x, want_cache: bool):
    arch = params.arch
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = x.shape[0]
    s = arch.input_scale
    fv = (s * x)[:, None]
    fd = np.full((n, 1), s)
    fs = np.zeros((n, 1))
    cache = [(fv, fd, fs, None, None, None)] if want_cache else None

    n_hidden = arch.layers - 1
    for q in range(n_hidden):
        W, b = params.weights[q], params.biases[q]
        zv = fv @ W.T + b
        zd = fd @ W.T
        zs = fs @ W.T
        a0, a1, a2, _ = _activation_tables(arch, zv)
        fv = a0
        fd = a1 * zd
        fs = a2 * zd * zd + a1 * zs
        if want_cache:
            cache.append((fv, fd, fs, zd, zs, a1))

    W, b = params.weights[-1], params.biases[-1]
    out = NetworkJet(value=fv @ W.T + b, dx=fd @ W.T, dxx=fs @ W.T)
    return out, cache


def forward_jet(params: NetworkParameters, x) -> NetworkJet:
    """Evaluate the network and its first two x-derivatives at x (scalar or
    1-D array of positions)."""
    jet, _ = _forward(params, x, want_cache=False)
    return jet


def loss_and_param_gradient(params: NetworkParameters, x, jet_loss):
    """Scalar loss and its exact gradient with respect to every parameter.

    ``jet_loss(value, dx, dxx) -> (loss, g_value, g_dx, g_dxx)`` receives the
    network jet at the points x and returns the loss together with its partial
    derivatives with respect to each jet component (same shapes as the jet
    fields, or None for a component the loss does not use). The returned
    gradient is flat, in the same layer order as ``NetworkParameters.to_flat``.
    """
    arch = params.arch
    jet, cache = _forward(params, x, want_cache=True)
    loss, gv, gd, gs = jet_loss(jet.value, jet.dx, jet.dxx)
    if not np.isfinite(loss):
        raise NonFiniteLoss(f"loss evaluated to {loss}")

    n = jet.value.shape[0]
    zero = np.zeros((n, arch.output_dim))
    gv = zero if gv is None else np.asarray(gv, dtype=float)
    gd = zero if gd is None else np.asarray(gd, dtype=float)
    gs = zero if gs is None else np.asarray(gs, dtype=float)

    n_layers = arch.layers
    grad_W = [None] * n_layers
    grad_b = [None] * n_layers

    # Output layer is affine in all three jet components.
    fv, fd, fs, _, _, _ = cache[n_layers - 1]
    W = params.weights[-1]
    grad_W[-1] = gv.T @ fv + gd.T @ fd + gs.T @ fs
    grad_b[-1] = gv.sum(axis=0)
    bv, bd, bs = gv @ W, gd @ W, gs @ W

    for q in range(n_layers - 2, -1, -1):
        a0, _, _, zd, zs, a1 = cache[q + 1]
        a2, a3 = _higher_tables(arch, a0, a1)
        W = params.weights[q]
        prev_fv, prev_fd, prev_fs, _, _, _ = cache[q]

        zbar_v = bv * a1 + bd * a2 * zd + bs * (a3 * zd * zd + a2 * zs)
        zbar_d = bd * a1 + bs * (2.0 * a2 * zd)
        zbar_s = bs * a1

        grad_W[q] = zbar_v.T @ prev_fv + zbar_d.T @ prev_fd + zbar_s.T @ prev_fs
        grad_b[q] = zbar_v.sum(axis=0)

        if q > 0:
            bv, bd, bs = zbar_v @ W, zbar_d @ W, zbar_s @ W

    parts = []
    for gW, gb in zip(grad_W, grad_b):
        parts.append(gW.ravel())
        parts.append(gb)
    grad = np.concatenate(parts)
    if not np.all(np.isfinite(grad)):
        raise NonFiniteLoss("parameter gradient contains non-finite entries")
    return float(loss), grad
