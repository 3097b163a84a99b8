"""Pauli matrices, tensor embedding, and Pauli-string decomposition.

Conventions used throughout the package: site 1 is the leftmost tensor
factor (most significant bit of the basis index) and sigma^z |0> = +|0>.
"""

from dataclasses import dataclass

import numpy as np

PAULI_LETTERS = "IXYZ"

_P2 = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

# T4[a, 2r+c] = conj(sigma^a[r, c]); contracting one (row, col) bit pair of a
# matrix with T4 yields the letter-a coefficient for that site.
_T4 = np.array(
    [_P2[letter].conj().reshape(4) for letter in PAULI_LETTERS], dtype=np.complex128
)

MAX_SITES = 12


def num_sites(op: np.ndarray) -> int:
    """Number of spins for a 2^n x 2^n matrix; raises on any other shape."""
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {op.shape}")
    n = int(op.shape[0]).bit_length() - 1
    if 1 << n != op.shape[0]:
        raise ValueError(f"dimension {op.shape[0]} is not a power of two")
    return n


def site_mask(site: int, n_sites: int) -> int:
    """Bit mask of `site` (1-based, site 1 = most significant bit)."""
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} out of range [1, {n_sites}]")
    return 1 << (n_sites - site)


def pauli_matrix(letter: str) -> np.ndarray:
    """The single-site Pauli matrix for letter I, X, Y or Z."""
    if letter not in _P2:
        raise ValueError(f"unknown Pauli letter {letter!r}")
    return _P2[letter].copy()


def embed_site_operator(op1: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """I x ... x op1 x ... x I with op1 acting on `site` of an n-site chain."""
    if op1.shape != (2, 2):
        raise ValueError("op1 must be a single-site (2x2) operator")
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} out of range [1, {n_sites}]")
    left = np.eye(1 << (site - 1), dtype=np.complex128)
    right = np.eye(1 << (n_sites - site), dtype=np.complex128)
    return np.kron(np.kron(left, op1), right)


@dataclass(frozen=True)
class PauliString:
    """A product of Pauli matrices with a complex coefficient.

    `word` holds one letter per site, site 1 first.  `body_size` is always
    derived from the word (count of non-identity letters), never stored.
    """

    word: str
    coefficient: complex = 1.0 + 0.0j

    def __post_init__(self):
        bad = set(self.word) - set(PAULI_LETTERS)
        if bad:
            raise ValueError(f"invalid Pauli letters {sorted(bad)} in {self.word!r}")

    @property
    def n_sites(self) -> int:
        return len(self.word)

    @property
    def body_size(self) -> int:
        return sum(1 for ch in self.word if ch != "I")

    def to_matrix(self) -> np.ndarray:
        return self.coefficient * pauli_string_matrix(self.word)


def pauli_string_matrix(word: str) -> np.ndarray:
    """Dense matrix of a Pauli word (unit coefficient)."""
    out = _P2[word[0]]
    for ch in word[1:]:
        out = np.kron(out, _P2[ch])
    return out.copy()


def pauli_coefficients(op: np.ndarray) -> np.ndarray:
    """All 4^n Pauli coefficients b_S = tr(S' op) / 2^n as a flat array.

    Index is read base 4, one digit per site (site 1 most significant),
    with digit 0..3 meaning I, X, Y, Z.  O(n 4^n) instead of brute-force
    trace products.
    """
    n = num_sites(op)
    if n > MAX_SITES:
        raise ValueError(f"n_sites={n} exceeds the supported maximum {MAX_SITES}")
    t = op.reshape((2,) * (2 * n))
    # interleave row and column bits per site, then fuse each pair to 0..3
    order = [ax for k in range(n) for ax in (k, n + k)]
    t = t.transpose(order).reshape((4,) * n)
    for _ in range(n):
        t = np.tensordot(_T4, t, axes=([1], [n - 1]))
    return t.reshape(-1) / (1 << n)


def index_to_word(index: int, n_sites: int) -> str:
    digits = []
    for k in range(n_sites):
        digits.append(PAULI_LETTERS[(index >> (2 * (n_sites - 1 - k))) & 3])
    return "".join(digits)


def pauli_decompose(op: np.ndarray, threshold: float = 1e-12) -> list[PauliString]:
    """Decompose op into Pauli strings, dropping |coefficient| <= threshold."""
    n = num_sites(op)
    coeffs = pauli_coefficients(op)
    keep = np.flatnonzero(np.abs(coeffs) > threshold)
    return [PauliString(index_to_word(int(i), n), complex(coeffs[i])) for i in keep]


def pauli_reconstruct(strings: list[PauliString], n_sites: int) -> np.ndarray:
    """Sum coefficient * string matrix; inverse of pauli_decompose at small n."""
    dim = 1 << n_sites
    out = np.zeros((dim, dim), dtype=np.complex128)
    for s in strings:
        if len(s.word) != n_sites:
            raise ValueError(f"word {s.word!r} does not have {n_sites} letters")
        out += s.coefficient * pauli_string_matrix(s.word)
    return out


_BODY_CACHE: dict = {}


def body_tables(n_sites: int):
    """Per-index body size and few-body class masks for all 4^n Pauli words.

    Returns (body_size, one_body, nn_two_body): a uint8 array and two boolean
    arrays over the flat coefficient index.  nn_two_body marks words with
    exactly two non-identity letters on adjacent sites.
    """
    cached = _BODY_CACHE.get(n_sites)
    if cached is not None:
        return cached
    size = 1 << (2 * n_sites)
    idx = np.arange(size, dtype=np.int64)
    body = np.zeros(size, dtype=np.uint8)
    first = np.full(size, n_sites, dtype=np.int8)
    last = np.full(size, -1, dtype=np.int8)
    for k in range(n_sites):
        nontrivial = ((idx >> (2 * (n_sites - 1 - k))) & 3) != 0
        body += nontrivial.astype(np.uint8)
        first = np.where(nontrivial & (first == n_sites), k, first)
        last = np.where(nontrivial, k, last)
    one_body = body == 1
    nn_two = (body == 2) & ((last - first) == 1)
    _BODY_CACHE[n_sites] = (body, one_body, nn_two)
    return _BODY_CACHE[n_sites]


def acts_trivially_on(op: np.ndarray, site: int, tol: float = 1e-10) -> bool:
    """True when op equals identity-on-`site` tensor a reduced operator."""
    n = num_sites(op)
    m = site_mask(site, n)
    hi = op.shape[0] // (2 * m)
    v6 = op.reshape(hi, 2, m, hi, 2, m)
    red = 0.5 * (v6[:, 0, :, :, 0, :] + v6[:, 1, :, :, 1, :])
    if np.abs(v6[:, 0, :, :, 1, :]).max(initial=0.0) > tol:
        return False
    if np.abs(v6[:, 1, :, :, 0, :]).max(initial=0.0) > tol:
        return False
    return (
        np.abs(v6[:, 0, :, :, 0, :] - red).max(initial=0.0) <= tol
        and np.abs(v6[:, 1, :, :, 1, :] - red).max(initial=0.0) <= tol
    )
