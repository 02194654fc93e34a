"""Minimal interval-output feedforward network.

One shared hidden layer, linear output layer with two units interpreted as
(lower, upper). Parameters live in a single flat vector so derivative-free
optimizers can perturb them directly; the batched forward pass is delegated
to the selected kernel backend.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from . import backend

ACTIVATIONS = {"tanh": backend.ACT_TANH, "logistic": backend.ACT_LOGISTIC}

DEFAULT_INIT_SCALE = 0.5


def n_weights(input_dim: int, hidden: int) -> int:
    """Flat vector length: W1 + b1 + W2 + b2."""
    return input_dim * hidden + hidden + hidden * 2 + 2


@dataclass(frozen=True)
class MlpModel:
    input_dim: int
    hidden: int
    activation: str
    weights: np.ndarray

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(
                f"unknown activation {self.activation!r}; expected one of {sorted(ACTIVATIONS)}"
            )
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        expected = n_weights(self.input_dim, self.hidden)
        if w.shape != (expected,):
            raise ValueError(
                f"weight vector has shape {w.shape}, expected ({expected},)"
            )
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")

    def with_weights(self, weights: np.ndarray) -> "MlpModel":
        return replace(self, weights=weights)

    def unflatten(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(W1 (hidden, input_dim), b1, W2 (2, hidden), b2) views of the flat vector."""
        d, h = self.input_dim, self.hidden
        w = self.weights
        w1 = w[: h * d].reshape(h, d)
        b1 = w[h * d : h * d + h]
        w2 = w[h * d + h : h * d + 3 * h].reshape(2, h)
        b2 = w[h * d + 3 * h :]
        return w1, b1, w2, b2

    def to_json(self) -> str:
        return json.dumps(
            {
                "input_dim": self.input_dim,
                "hidden": self.hidden,
                "activation": self.activation,
                "weights": self.weights.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "MlpModel":
        data = json.loads(text)
        return cls(
            input_dim=data["input_dim"],
            hidden=data["hidden"],
            activation=data["activation"],
            weights=np.asarray(data["weights"], dtype=float),
        )


def flatten(w1, b1, w2, b2) -> np.ndarray:
    """Inverse of ``MlpModel.unflatten``."""
    return np.concatenate([np.ravel(w1), np.ravel(b1), np.ravel(w2), np.ravel(b2)])


def init_weights(
    input_dim: int,
    hidden: int,
    activation: str = "tanh",
    seed=0,
    scale: float = DEFAULT_INIT_SCALE,
) -> MlpModel:
    """Model with i.i.d. uniform weights in [-scale, scale].

    ``seed`` may be an int, SeedSequence, or Generator.
    """
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    w = rng.uniform(-scale, scale, size=n_weights(input_dim, hidden))
    return MlpModel(input_dim=input_dim, hidden=hidden, activation=activation, weights=w)


def predict_dataset(model: MlpModel, features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched forward pass: (lower, upper) arrays over the feature rows."""
    X = np.atleast_2d(np.asarray(features, dtype=float))
    if X.shape[0] == 0:
        raise ValueError("empty feature batch")
    if X.shape[1] != model.input_dim:
        raise ValueError(
            f"feature dim {X.shape[1]} does not match input_dim {model.input_dim}"
        )
    return backend.forward_batch(
        np.ascontiguousarray(model.weights),
        np.ascontiguousarray(X),
        model.hidden,
        ACTIVATIONS[model.activation],
    )


def forward(model: MlpModel, features) -> tuple[float, float]:
    """Single-sample forward pass returning (lower, upper)."""
    lower, upper = predict_dataset(model, np.asarray(features, dtype=float)[None, :])
    return float(lower[0]), float(upper[0])
