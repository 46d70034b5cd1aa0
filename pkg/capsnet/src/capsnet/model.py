"""The sentence-redundancy classifier.

Each sentence runs through a multi-width convolutional encoder giving
per-position features u_i (one per token slot, all filter sizes
concatenated) and a max-pooled sentence vector u. The per-position
features of both sentences become the low-level capsules; a shared linear
transform proposes their contributions to each high-level capsule and
dynamic routing reweights them by agreement. The classifier head sees
[u_a; u_b; |u_a - u_b|; u_a * u_b; v; z_a; z_b] where v is the max-pooled
high-level capsule vector and z are word-overlap indicators.

Training minimizes binary cross-entropy plus a small reconstruction term:
a GRU decoder regenerates each sentence from its pooled vector with
teacher forcing.
"""

from __future__ import annotations

import torch
import torch.nn.functional as F
from torch import nn

from .config import ModelConfig
from .data import PairBatch
from .vocab import BOS_ID, PAD_ID


def squash(v: torch.Tensor) -> torch.Tensor:
    """Norm-bounding nonlinearity: ||g(v)|| = ||v||^2 / (1 + ||v||^2) < 1.

    Direction is preserved; the zero vector maps to itself.
    """
    norm = torch.linalg.vector_norm(v, dim=-1, keepdim=True)
    return v * (norm / (1.0 + norm * norm))


def dynamic_routing(
    u_hat: torch.Tensor, iters: int, return_coefficients: bool = False
):
    """Agreement routing from low-level to high-level capsules.

    ``u_hat`` has shape (batch, n_low, n_high, capsule_dim). Logits start
    at zero, so the first coefficients are uniform over the high-level
    capsules; each iteration adds the u_hat . v agreement and recomputes.
    With ``iters = 0`` the result is the squashed uniform-weighted sum.
    """
    batch, n_low, n_high, _ = u_hat.shape
    logits = torch.zeros(batch, n_low, n_high, dtype=u_hat.dtype, device=u_hat.device)
    coeffs = torch.softmax(logits, dim=-1)
    v = squash(torch.einsum("bim,bimd->bmd", coeffs, u_hat))
    trace = [coeffs]
    for _ in range(iters):
        logits = logits + torch.einsum("bimd,bmd->bim", u_hat, v)
        coeffs = torch.softmax(logits, dim=-1)
        v = squash(torch.einsum("bim,bimd->bmd", coeffs, u_hat))
        trace.append(coeffs)
    if return_coefficients:
        return v, trace
    return v


class ConvEncoder(nn.Module):
    """Same-length multi-width convolutions with ReLU, plus max-pooling."""

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.filter_sizes = config.filter_sizes
        self.convs = nn.ModuleList(
            nn.Conv1d(config.embedding_dim, config.filters_per_size, k)
            for k in config.filter_sizes
        )

    def forward(self, embedded: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """(batch, L, E) -> per-position (batch, L, D) and pooled (batch, D)."""
        x = embedded.transpose(1, 2)
        feats = []
        for k, conv in zip(self.filter_sizes, self.convs):
            padded = F.pad(x, ((k - 1) // 2, k // 2))
            feats.append(F.relu(conv(padded)))
        local = torch.cat(feats, dim=1).transpose(1, 2)
        return local, local.max(dim=1).values


class ReconstructionDecoder(nn.Module):
    """Teacher-forced GRU that regenerates a sentence from its pooled vector."""

    def __init__(self, config: ModelConfig, vocab_size: int, embedding: nn.Embedding):
        super().__init__()
        self.embedding = embedding
        self.init_proj = nn.Linear(config.encoder_dim, config.recon_hidden)
        self.gru = nn.GRU(config.embedding_dim, config.recon_hidden, batch_first=True)
        self.out_proj = nn.Linear(config.recon_hidden, vocab_size)

    def loss(self, ids: torch.Tensor, pooled: torch.Tensor) -> torch.Tensor:
        """Token-averaged cross-entropy over non-pad positions."""
        bos = torch.full((ids.shape[0], 1), BOS_ID, dtype=ids.dtype, device=ids.device)
        inputs = self.embedding(torch.cat([bos, ids[:, :-1]], dim=1))
        h0 = torch.tanh(self.init_proj(pooled)).unsqueeze(0)
        outputs, _ = self.gru(inputs, h0)
        logits = self.out_proj(outputs)
        return F.cross_entropy(
            logits.reshape(-1, logits.shape[-1]), ids.reshape(-1), ignore_index=PAD_ID
        )


class RedundancyCapsNet(nn.Module):
    def __init__(self, config: ModelConfig, vocab_size: int):
        super().__init__()
        self.config = config.validate()
        self.vocab_size = vocab_size
        d = config.encoder_dim
        self.embedding = nn.Embedding(vocab_size, config.embedding_dim, padding_idx=PAD_ID)
        self.encoder = ConvEncoder(config)
        # Shared across all low-level capsules: one transform per high-level
        # capsule, applied to every position of both sentences.
        self.capsule_proj = nn.Linear(
            d, config.num_capsules * config.capsule_dim, bias=False
        )
        head_dim = 4 * d + config.capsule_dim + 2 * config.max_len
        self.head = nn.Linear(head_dim, 1)
        self.decoder = ReconstructionDecoder(config, vocab_size, self.embedding)

    def encode(self, ids: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        return self.encoder(self.embedding(ids))

    def capsules(
        self, local_a: torch.Tensor, local_b: torch.Tensor,
        return_coefficients: bool = False,
    ):
        """High-level capsules (batch, M, B) from both sentences' positions."""
        low = torch.cat([local_a, local_b], dim=1)
        u_hat = self.capsule_proj(low).view(
            low.shape[0], low.shape[1], self.config.num_capsules, self.config.capsule_dim
        )
        return dynamic_routing(
            u_hat, self.config.routing_iters, return_coefficients=return_coefficients
        )

    def forward(self, batch: PairBatch) -> torch.Tensor:
        """Redundancy probability for each pair, shape (batch,)."""
        local_a, pooled_a = self.encode(batch.ids_a)
        local_b, pooled_b = self.encode(batch.ids_b)
        caps = self.capsules(local_a, local_b)
        v = caps.max(dim=1).values
        feats = torch.cat(
            [
                pooled_a, pooled_b,
                (pooled_a - pooled_b).abs(), pooled_a * pooled_b,
                v, batch.z_a, batch.z_b,
            ],
            dim=1,
        )
        return torch.sigmoid(self.head(feats)).squeeze(1)

    def loss(self, batch: PairBatch) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        """(total, bce, recon): BCE + lambda * (recon_a + recon_b)."""
        local_a, pooled_a = self.encode(batch.ids_a)
        local_b, pooled_b = self.encode(batch.ids_b)
        caps = self.capsules(local_a, local_b)
        v = caps.max(dim=1).values
        feats = torch.cat(
            [
                pooled_a, pooled_b,
                (pooled_a - pooled_b).abs(), pooled_a * pooled_b,
                v, batch.z_a, batch.z_b,
            ],
            dim=1,
        )
        prob = torch.sigmoid(self.head(feats)).squeeze(1)
        bce = F.binary_cross_entropy(prob, batch.labels)
        recon = self.decoder.loss(batch.ids_a, pooled_a) + self.decoder.loss(
            batch.ids_b, pooled_b
        )
        return bce + self.config.lambda_recon * recon, bce, recon

    @torch.no_grad()
    def predict(self, batch: PairBatch) -> torch.Tensor:
        self.eval()
        return self.forward(batch)

    @torch.no_grad()
    def predict_symmetric(self, batch: PairBatch) -> torch.Tensor:
        """Order-averaged score: (p(a,b) + p(b,a)) / 2; exactly symmetric."""
        self.eval()
        forward = self.forward(batch)
        swapped = PairBatch(
            ids_a=batch.ids_b, ids_b=batch.ids_a,
            z_a=batch.z_b, z_b=batch.z_a, labels=batch.labels,
        )
        return (forward + self.forward(swapped)) / 2.0
