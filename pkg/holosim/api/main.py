"""
FastAPI main application for HoloSim
"""
from fastapi import FastAPI, HTTPException, status
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field
from typing import List, Optional
import logging
import numpy as np

from holosim.bench.calibration import gate_process_fidelity
from holosim.bench.run_setup import noise_model, resolve_gate
from holosim.bench.schemes import build_schedule, kind_for
from holosim.config import RunConfig, build_run_config, config
from holosim.control.schedule import NO_ERROR, StaSchedule
from holosim.core.linalg import average_gate_fidelity
from holosim.exceptions import ConfigError, GateNotFoundError, HoloSimError
from holosim.gates.holonomy import NAMED_GATES, drive_spec_for, extract_qubit_gate, holonomy_matrix
from holosim.gates.phases import PhaseReport, phase_report
from holosim.propagation.evolve import evolve_unitary
from holosim.utils import exporters

# Configure logging
logging.basicConfig(level=config.LOG_LEVEL)
logger = logging.getLogger(__name__)

API_DEFAULT_STEPS = 2000
MAX_PULSE_SAMPLES = 20000

# Create FastAPI app
app = FastAPI(
    title="HoloSim API",
    description="Shortcut-to-adiabaticity holonomic gate simulator",
    version=config.VERSION
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["http://localhost:3000", "http://127.0.0.1:3000"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Pydantic models
class GateRequest(BaseModel):
    gate: Optional[str] = "X"
    theta: Optional[float] = None
    phi: Optional[float] = None
    gamma: Optional[float] = None
    omega_a_hz: Optional[float] = None
    duration_t_s: Optional[float] = None
    n_steps: int = Field(default=API_DEFAULT_STEPS, ge=100, le=100000)
    noise_enabled: bool = False
    scheme: str = "StaBaseline"
    preparation: str = "exact"

class GateInfo(BaseModel):
    name: str
    theta: float
    phi: float
    gamma: float

class GateResponse(BaseModel):
    gate: str
    theta: float
    phi: float
    gamma: float
    duration_t_s: float
    fidelity: float
    leakage: float
    noise_enabled: bool
    unitary_re: Optional[List[List[float]]]
    unitary_im: Optional[List[List[float]]]

class PhaseResponse(PhaseReport):
    gate: str

class ChiResponse(BaseModel):
    basis: List[str]
    re: List[List[float]]
    im: List[List[float]]
    fidelity: float
    gate: str

class PulseRequest(GateRequest):
    n_samples: int = Field(default=exporters.DEFAULT_PULSE_SAMPLES, ge=2, le=MAX_PULSE_SAMPLES)

class PulseResponse(BaseModel):
    columns: List[str]
    rows: List[List[float]]


def _run_config(request: GateRequest) -> RunConfig:
    fields = request.model_dump(exclude_none=True, exclude={"n_samples"})
    return build_run_config(fields)


def _http_error(e: Exception) -> HTTPException:
    if isinstance(e, GateNotFoundError):
        return HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(e))
    if isinstance(e, ConfigError):
        return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
                             detail={"message": str(e), "keys": e.keys})
    return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@app.get("/gates", response_model=List[GateInfo])
def list_gates():
    """Named gates with their holonomy parameters"""
    return [GateInfo(name=name, theta=g.theta, phi=g.phi_rel, gamma=g.gamma) for name, g in NAMED_GATES.items()]


@app.post("/gates/simulate", response_model=GateResponse)
def simulate_gate(request: GateRequest):
    try:
        cfg = _run_config(request)
        label, target = resolve_gate(cfg)
        schedule = build_schedule(cfg.scheme, target, cfg.duration_T, cfg.omega_a)
        ideal = holonomy_matrix(target)
        if cfg.noise_enabled:
            fidelity, chi = gate_process_fidelity(schedule, target, noise_model(cfg), n_steps=cfg.n_steps,
                                                  preparation=cfg.preparation)
            record = exporters.gate_record(label, target, cfg.duration_T, fidelity, 1.0 - chi.trace, True)
        else:
            u3 = evolve_unitary(schedule, kind_for(schedule), NO_ERROR, cfg.n_steps).final_unitary
            extracted = extract_qubit_gate(u3, reference=ideal)
            fidelity = average_gate_fidelity(extracted.qubit_unitary, ideal)
            record = exporters.gate_record(label, target, cfg.duration_T, fidelity, extracted.leakage, False,
                                           extracted.qubit_unitary)
    except (HoloSimError, np.linalg.LinAlgError) as e:
        logger.error(f"Gate simulation failed: {e}")
        raise _http_error(e)
    return GateResponse(**record)


@app.post("/gates/phases", response_model=PhaseResponse)
def gate_phases(request: GateRequest):
    try:
        cfg = _run_config(request)
        label, target = resolve_gate(cfg)
        schedule = StaSchedule.for_gate(drive_spec_for(target), cfg.omega_a, cfg.duration_T)
        report = phase_report(schedule, max(cfg.n_steps, 1000))
    except (HoloSimError, np.linalg.LinAlgError) as e:
        logger.error(f"Phase computation failed: {e}")
        raise _http_error(e)
    return PhaseResponse(gate=label, **report.model_dump())


@app.post("/tomography", response_model=ChiResponse)
def tomography(request: GateRequest):
    """χ reconstruction at the requested (uncalibrated) duration"""
    try:
        cfg = _run_config(request)
        label, target = resolve_gate(cfg)
        schedule = build_schedule(cfg.scheme, target, cfg.duration_T, cfg.omega_a)
        fidelity, chi = gate_process_fidelity(schedule, target, noise_model(cfg), n_steps=cfg.n_steps,
                                              preparation=cfg.preparation)
    except (HoloSimError, np.linalg.LinAlgError) as e:
        logger.error(f"Tomography failed: {e}")
        raise _http_error(e)
    return ChiResponse(**exporters.chi_record(chi.entries, fidelity, label))


@app.post("/pulses", response_model=PulseResponse)
def pulses(request: PulseRequest):
    try:
        cfg = _run_config(request)
        _, target = resolve_gate(cfg)
        schedule = build_schedule(cfg.scheme, target, cfg.duration_T, cfg.omega_a)
        frame = exporters.pulses_frame(schedule, request.n_samples)
    except (HoloSimError, np.linalg.LinAlgError) as e:
        logger.error(f"Pulse export failed: {e}")
        raise _http_error(e)
    return PulseResponse(columns=list(frame.columns), rows=frame.values.tolist())

# Health check endpoint
@app.get("/health")
def health_check():
    """Health check endpoint"""
    return {"status": "healthy", "message": "HoloSim API is running", "version": config.VERSION}

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host=config.API_HOST, port=config.API_PORT)
