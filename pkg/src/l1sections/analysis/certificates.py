# src/l1sections/analysis/certificates.py
"""Arithmetic on spread certificates: conversions to and from distortion,
composition of chained certificates, and the expander pushdown rule."""
import logging
import math
from typing import Sequence

from ..constants import Provenance
from ..exceptions import CertificateError, ChainError, DomainError
from ..expanders.profile import ProfileBound
from ..types import DistortionBound, SpreadCertificate

logger = logging.getLogger(__name__)

ANCHOR = 0.5


def spread_to_distortion(cert: SpreadCertificate, N: int) -> DistortionBound:
    """(t, eps)-spread gives distortion at most sqrt(N/t) / eps^2."""
    if not cert.anchored:
        raise CertificateError(f"certificate with lower size {cert.t} > 1/2 is not in (t, eps) form")
    if cert.T <= 0:
        raise CertificateError("certificate with T = 0 bounds nothing")
    upper = math.sqrt(N / cert.T) / (cert.eps * cert.eps)
    return DistortionBound(N=N, upper=upper, trail=cert.trail + (f"distortion-from-spread(N={N})",))


def distortion_to_spread(delta: float, N: int,
                         provenance: Provenance = Provenance.PROVED_ARITHMETIC) -> SpreadCertificate:
    """Distortion delta gives (N / (2 delta^2), 1 / (4 delta))-spread."""
    if delta < 1:
        raise DomainError(f"distortion is at least 1, got {delta}")
    return SpreadCertificate(
        t=0.0,
        T=N / (2 * delta * delta),
        eps=1 / (4 * delta),
        provenance=provenance,
        trail=(f"spread-from-distortion(delta={delta:g},N={N})",),
    )


def compose_certificates(certificates: Sequence[SpreadCertificate]) -> SpreadCertificate:
    """(t_0, T_0, e_0), (T_0, T_1, e_1), ... intersect to (t_0, T_r, e_0 e_1 ... e_r)."""
    if not certificates:
        raise CertificateError("cannot compose an empty list of certificates")
    if len(certificates) == 1:
        return certificates[0]
    for i, (prev, nxt) in enumerate(zip(certificates, certificates[1:])):
        if not math.isclose(prev.T, nxt.t, rel_tol=1e-12, abs_tol=1e-12):
            raise ChainError(f"certificate {i} ends at T={prev.T} but certificate {i + 1} starts at t={nxt.t}")
        if nxt.t < prev.t:
            raise ChainError(f"lower sizes decrease at certificate {i + 1}")
    eps = math.prod(c.eps for c in certificates)
    notes = tuple(dict.fromkeys(n for c in certificates for n in c.notes if n != "not-useful"))
    trail = tuple(step for c in certificates for step in c.trail) + (f"compose({len(certificates)})",)
    return SpreadCertificate(
        t=certificates[0].t,
        T=certificates[-1].T,
        eps=eps,
        provenance=Provenance.weakest(*(c.provenance for c in certificates)),
        trail=trail,
        notes=notes,
    )


def pushdown_certificate(profile: ProfileBound, inner: SpreadCertificate, D: int,
                         T0: float) -> SpreadCertificate:
    """
    X(G, L) is (T0, (t/D) Lambda_G(T0), eps/sqrt(2D))-spread when L is
    (t, eps)-spread and G has left degree at most D. A step that does not
    grow T is returned as the vacuous (T0, T0, eps') and flagged not-useful.
    """
    if not inner.anchored:
        raise CertificateError("inner certificate must be in (t, eps) form")
    if not 0 < T0 <= profile.N:
        raise DomainError(f"T0={T0} outside (0, N={profile.N}]")
    if D < 1:
        raise DomainError(f"left degree bound must be positive, got {D}")
    T = inner.T / D * profile.evaluate(T0)
    eps = inner.eps / math.sqrt(2 * D)
    provenance = Provenance.weakest(inner.provenance, profile.provenance)
    step = f"pushdown(T0={T0:g},D={D},profile={profile.describe()})"
    if T <= T0:
        logger.debug(f"pushdown from T0={T0:g} reaches only T={T:g}; not useful")
        return SpreadCertificate(
            t=T0, T=T0, eps=eps, provenance=provenance,
            trail=inner.trail + (step,), notes=("not-useful",),
        )
    return SpreadCertificate(t=T0, T=T, eps=eps, provenance=provenance, trail=inner.trail + (step,))


def iterated_pushdown(profile: ProfileBound, inner: SpreadCertificate, D: int,
                      steps: int, T0: float = ANCHOR) -> SpreadCertificate:
    """
    Applies the pushdown rule with the same graph and inner space up to
    `steps` times, starting at T0 and restarting each step at the previous T,
    then composes the chain. Stops at the first step that does not grow T.
    """
    chain = []
    current = T0
    for _ in range(max(steps, 1)):
        step = pushdown_certificate(profile, inner, D, current)
        if not step.useful:
            if not chain:
                chain.append(step)
            break
        chain.append(step)
        current = step.T
        if current >= profile.N:
            break
    return compose_certificates(chain)
