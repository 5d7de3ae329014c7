"""FastAPI service exposing the computations over JSON.

All endpoints are pure POST computations; the only shared state is the
read-only prime sieve cache, so the app is safe under concurrent requests.
Invalid domain inputs surface as 400 with the underlying message.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__, extremality, measures, orbits, repro, spectra, wiener
from .exact import UnitAngle
from .measures import CircleMeasure
from .schemas import (
    SCHEMA,
    ExtremalRequest,
    ExtremalResponse,
    HealthResponse,
    MeasureSpec,
    OrbitRequest,
    OrbitResponse,
    RealSequenceSpec,
    ReproRequest,
    ReproResponse,
    SeqRequest,
    SeqResponse,
    SequenceSpec,
    SpectrumEntryModel,
    SpectrumRequest,
    SpectrumResponse,
    VerdictModel,
    WienerRequest,
    WienerResponse,
)
from .sequences import (
    IntSequence,
    RealSequence,
    SequenceRangeError,
    gap_liminf_probe,
    upper_density_estimate,
)

app = FastAPI(
    title="wienerlab",
    version=__version__,
    description="Limit functions, Wiener averages, extremality certificates and "
    "operator-orbit identities along arithmetic subsequences.",
)


def _build_sequence(spec: SequenceSpec) -> IntSequence:
    try:
        return IntSequence.from_json(spec.model_dump())
    except (ValueError, KeyError, TypeError) as exc:
        raise HTTPException(status_code=400, detail=f"bad sequence spec: {exc}") from exc


def _build_real_sequence(spec: RealSequenceSpec) -> RealSequence:
    try:
        return RealSequence.from_json(spec.model_dump())
    except (ValueError, KeyError, TypeError) as exc:
        raise HTTPException(status_code=400, detail=f"bad real sequence spec: {exc}") from exc


def _build_measure(spec: MeasureSpec) -> CircleMeasure:
    try:
        obj = spec.model_dump(exclude_none=True)
        xi_value = obj.pop("xi_value", None)
        if xi_value is not None:
            return CircleMeasure.from_json(obj, xi_value=xi_value)
        return CircleMeasure.from_json(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise HTTPException(status_code=400, detail=f"bad measure spec: {exc}") from exc


def _config(request) -> dict:
    return request.model_dump(mode="json", exclude_none=True)


@app.get("/v1/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/v1/seq", response_model=SeqResponse, response_model_exclude_none=True)
def seq_endpoint(req: SeqRequest) -> SeqResponse:
    seq = _build_sequence(req.sequence)
    try:
        terms = seq.terms(req.count)
        residues = seq.residues(req.count, req.modulus) if req.modulus else None
        min_gap = repeats = None
        if req.gap_horizon:
            min_gap, repeats = gap_liminf_probe(seq, req.gap_horizon)
        density = (
            upper_density_estimate(seq, req.density_bound)
            if req.density_bound
            else None
        )
        return SeqResponse(
            config=_config(req),
            terms=terms,
            residues=residues,
            max_safe_index=seq.max_safe_index,
            min_gap=min_gap,
            min_gap_repeats=repeats,
            upper_density=density,
        )
    except (SequenceRangeError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/v1/spectrum", response_model=SpectrumResponse, response_model_exclude_none=True)
def spectrum_endpoint(req: SpectrumRequest) -> SpectrumResponse:
    seq = _build_sequence(req.sequence)
    try:
        table = spectra.spectrum_scan(
            seq, req.q_max, threshold=req.threshold, empirical_N=req.empirical_N
        )
    except (SequenceRangeError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    order = None
    note = None
    if req.detect_group:
        try:
            order = spectra.unimodular_group_detect(table)
        except spectra.InconsistentSpectrumError as exc:
            note = str(exc)
    entries = [
        SpectrumEntryModel(
            b=e.b,
            q=e.q,
            re=e.value.real,
            im=e.value.imag,
            abs=abs(e.value),
            provenance=e.provenance,
        )
        for e in table.entries
    ]
    return SpectrumResponse(
        config=_config(req), entries=entries, unimodular_order=order, group_note=note
    )


@app.post("/v1/wiener", response_model=WienerResponse, response_model_exclude_none=True)
def wiener_endpoint(req: WienerRequest) -> WienerResponse:
    seq = _build_sequence(req.sequence)
    mu = _build_measure(req.measure)
    try:
        empirical = wiener.empirical_wiener_avg(mu, seq, req.N)
    except (SequenceRangeError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    theoretical = None
    formula = "none"
    if seq.kind in spectra.CLOSED_FORM_KINDS and all(
        angle.is_exact for angle, _ in mu.atoms
    ):
        theoretical = wiener.countable_spectrum_limit(mu, spectra.closed_form_c_for(seq))
        formula = "countable-spectrum"
    report = wiener.WienerReport(
        empirical=empirical, N=req.N, theoretical=theoretical, formula_used=formula
    )
    return WienerResponse(config=_config(req), **report.to_json())


def _verdict_model(v: extremality.ExtremalityVerdict) -> VerdictModel:
    return VerdictModel(**v.to_json())


@app.post("/v1/extremal", response_model=ExtremalResponse, response_model_exclude_none=True)
def extremal_endpoint(req: ExtremalRequest) -> ExtremalResponse:
    try:
        if req.of_primes:
            verdict = extremality.is_extremal_poly_primes(req.coeffs)
            wiener_verdict = extremality.wiener_extremal_verdict_poly_primes(req.coeffs)
        else:
            verdict = extremality.is_extremal_poly(req.coeffs)
            wiener_verdict = extremality.wiener_extremal_verdict_poly(req.coeffs)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    gaps_probe = density_probe = None
    if req.q_max and req.horizon:
        seq = _probe_sequence(req)
        gaps_probe = _verdict_model(
            extremality.bounded_gaps_extremality_check(seq, req.q_max, req.horizon)
        )
        density_probe = _verdict_model(
            extremality.pos_density_wiener_check(seq, req.q_max, req.horizon)
        )
    return ExtremalResponse(
        config=_config(req),
        verdict=_verdict_model(verdict),
        wiener_extremal=_verdict_model(wiener_verdict),
        bounded_gaps_probe=gaps_probe,
        positive_density_probe=density_probe,
    )


def _probe_sequence(req: ExtremalRequest) -> IntSequence:
    from .sequences import poly_of_primes_seq, poly_seq, sieve_limit_for_count

    if req.of_primes:
        return poly_of_primes_seq(req.coeffs, sieve_limit_for_count(req.horizon or 1000))
    return poly_seq(req.coeffs)


def _complex_vector(pairs) -> list[complex]:
    return [complex(re, im) for re, im in pairs]


@app.post("/v1/orbit", response_model=OrbitResponse, response_model_exclude_none=True)
def orbit_endpoint(req: OrbitRequest) -> OrbitResponse:
    try:
        return _orbit_dispatch(req)
    except (SequenceRangeError, ValueError, ArithmeticError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def _orbit_dispatch(req: OrbitRequest) -> OrbitResponse:
    if req.mode == "semigroup":
        if req.semigroup is None or req.real_sequence is None or req.x is None:
            raise ValueError("semigroup mode needs semigroup, real_sequence and x")
        S = orbits.DiagonalSemigroup.from_json(req.semigroup.model_dump())
        rseq = _build_real_sequence(req.real_sequence)
        x = _complex_vector(req.x)
        y = _complex_vector(req.y) if req.y else x
        report = orbits.semigroup_orbit_avg(
            S, x, y, rseq, req.N, tol=req.tol if req.tol is not None else 0.05
        )
        return OrbitResponse(
            config=_config(req),
            mode=req.mode,
            empirical=report.empirical,
            theoretical=report.theoretical,
            diagonal_reference=report.diagonal_reference,
            eigen_support=report.eigen_support,
            verdict=report.verdicts.get("flag"),
            detail=report.verdicts,
        )
    if req.operator is None or req.sequence is None:
        raise ValueError(f"{req.mode} mode needs operator and sequence")
    T = orbits.DiagonalContraction.from_json(req.operator.model_dump(exclude_none=True))
    seq = _build_sequence(req.sequence)
    if req.mode == "gelfand":
        g = orbits.gelfand_probe(T, seq, req.N, tol=req.tol if req.tol is not None else 1e-9)
        return OrbitResponse(
            config=_config(req),
            mode=req.mode,
            verdict=g.verdict,
            detail={
                "orbit_condition": g.orbit_condition,
                "tail_max_distance": g.tail_max_distance,
                "explanation": g.explanation,
            },
        )
    if req.x is None:
        raise ValueError(f"{req.mode} mode needs a vector x")
    x = _complex_vector(req.x)
    if req.mode == "average":
        y = _complex_vector(req.y) if req.y else x
        empirical = orbits.orbit_inner_avg(T, x, y, seq, req.N)
        theoretical = None
        if seq.kind in spectra.CLOSED_FORM_KINDS:
            theoretical = orbits.theoretical_orbit_limit(
                T, x, y, spectra.closed_form_c_for(seq)
            )
        return OrbitResponse(
            config=_config(req),
            mode=req.mode,
            empirical=empirical,
            theoretical=theoretical,
        )
    if req.mode == "eigenvector":
        r = orbits.eigenvector_extremality_test(
            T, x, seq, req.N, tol=req.tol if req.tol is not None else 1e-9
        )
        return OrbitResponse(
            config=_config(req),
            mode=req.mode,
            empirical=r.average,
            theoretical=r.norm4,
            eigen_support=r.eigen_support,
            verdict="consistent" if r.consistent else "inconsistent",
            detail={
                "attains": r.attains,
                "is_eigenvector": r.is_eigenvector,
                "sequence_verdict": r.sequence_verdict,
                "note": r.note,
            },
        )
    # classical
    r = orbits.classical_limit_test(
        T, x, seq, req.N, tol=req.tol if req.tol is not None else 1e-6
    )
    return OrbitResponse(
        config=_config(req),
        mode=req.mode,
        verdict="passes" if r.passes else "fails",
        detail={
            "norm_sq": r.norm_sq,
            "tail_max_deviation": r.tail_max_deviation,
            "phase_residual": r.phase_residual,
            "residual_bound": r.residual_bound,
            "note": r.note,
        },
    )


@app.post("/v1/repro", response_model=ReproResponse)
def repro_endpoint(req: ReproRequest) -> ReproResponse:
    results = repro.run(req.items)
    return ReproResponse(
        config=_config(req),
        results=[r.to_json() for r in results],
        all_passed=all(r.passed for r in results),
    )
