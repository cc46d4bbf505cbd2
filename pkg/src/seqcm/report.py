"""
Runs session commands against the engine and assembles the report document.
The JSON form has a fixed key order and sorted prime sets, so the same input
and seed give byte-identical output.
"""
import hashlib
import json
import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from seqcm import __version__
from seqcm.config import DEFAULT_SETTINGS, SearchSettings
from seqcm.exceptions import SeqcmError
from seqcm.homology import is_cohen_macaulay, is_generalized_cm
from seqcm.invariants import (annihilator_dimensions, equivalence_harness, is_sequentially_cm,
                              is_sequentially_gcm, non_cm_locus_dim, polynomial_type, profile, sp_breakdown,
                              u0_dimension)
from seqcm.kernel import format_coefficient, format_polynomial
from seqcm.monomial import associated_primes, attached_prime_table, dimension_filtration
from seqcm.sequences import (annihilator_product, check_sequence, classify_element, find_p_standard_sop,
                             find_sequence, fit_length_polynomial, is_sop, verify_length_polynomial)
from seqcm.session import Command, SessionInput

logger = logging.getLogger(__name__)

ENGINE_NAME = "seqcm"


def primes_value(ring, primes) -> List[List[str]]:
    return [p.names(ring) for p in sorted(primes)]


def sequence_value(fs) -> Optional[List[str]]:
    if fs is None:
        return None
    return [format_polynomial(f) for f in fs]


def rational_value(c):
    text = format_coefficient(c)
    return int(text) if "/" not in text else text


def _breakdown_value(breakdown) -> Dict:
    return {
        "definition": list(breakdown.route_def),
        "associated_dimensions": list(breakdown.associated_dimensions),
        "q1": breakdown.q1,
        "q2": breakdown.q2,
    }


def run_profile(command: Command, settings: SearchSettings) -> Dict:
    ring = command.ideal.ring
    prof = profile(command.ideal, settings)
    return {
        "dimension": prof.dimension,
        "depth": prof.depth,
        "cm": prof.is_cm,
        "gcm": prof.is_gcm,
        "scm": prof.is_scm,
        "sgcm": prof.is_sgcm,
        "p": prof.p,
        "sp": prof.sp,
        "associated_primes": primes_value(ring, prof.ass),
        "attached": [primes_value(ring, att) for att in prof.attached],
        "filtration": {
            "dimensions": list(prof.filtration_dimensions),
            "cm": list(prof.filtration_cm),
            "gcm": list(prof.filtration_gcm),
        },
        "sp_breakdown": _breakdown_value(prof.breakdown),
        "non_cm_locus_dim": prof.non_cm_locus_dim,
        "u0_dim": prof.u0_dim,
        "witness": sequence_value(prof.witness),
        "falsifier": sequence_value(prof.falsifier),
    }


def run_classify(command: Command, settings: SearchSettings) -> Dict:
    m = command.ideal.quotient_module()
    c = classify_element(m, command.elements[0])
    return {
        "element": format_polynomial(c.element),
        "regular": c.is_regular,
        "f_element": c.is_f_element,
        "generalized_regular": c.is_generalized_regular,
        "sequential": c.is_sequential,
        "sequential_f": c.is_sequential_f,
        "hierarchy_holds": c.hierarchy_holds(),
        "failures": dict(sorted(c.witnesses.items())),
    }


def run_check_sequence(command: Command, settings: SearchSettings) -> Dict:
    m = command.ideal.quotient_module()
    report = check_sequence(m, command.elements, command.kind)
    failure = None
    if report.first_failure is not None:
        index, reason = report.first_failure
        failure = {"index": index, "reason": reason}
    return {
        "kind": command.kind.value,
        "elements": sequence_value(command.elements),
        "verdict": report.verdict,
        "first_failure": failure,
        "sop": is_sop(m, command.elements),
    }


def run_find_sequence(command: Command, settings: SearchSettings) -> Dict:
    m = command.ideal.quotient_module()
    found = find_sequence(m, command.kind, command.length, settings)
    return {
        "kind": command.kind.value,
        "length": command.length,
        "found": found is not None,
        "sequence": sequence_value(found),
    }


DECIDERS: Dict[str, Callable] = {
    "cm": lambda ideal: is_cohen_macaulay(ideal.quotient_module()),
    "gcm": lambda ideal: is_generalized_cm(ideal.quotient_module()),
    "scm": is_sequentially_cm,
    "sgcm": is_sequentially_gcm,
}


def run_decide(command: Command, settings: SearchSettings) -> Dict:
    return {
        "property": command.property,
        "verdict": DECIDERS[command.property](command.ideal),
    }


def run_invariants(command: Command, settings: SearchSettings) -> Dict:
    ideal = command.ideal
    m = ideal.quotient_module()
    breakdown = sp_breakdown(ideal)
    locus, u0 = non_cm_locus_dim(ideal), u0_dimension(ideal)
    return {
        "p": polynomial_type(m),
        "sp": breakdown.from_definition,
        "sp_breakdown": _breakdown_value(breakdown),
        "non_cm_locus_dim": locus,
        "u0_dim": u0,
        "p_from_loci": max(locus, u0),
        "annihilator_dimensions": list(annihilator_dimensions(m)),
    }


def run_harness(command: Command, settings: SearchSettings) -> Dict:
    report = equivalence_harness(command.ideal, settings)
    return {
        "seed": report.seed,
        "samples": report.samples,
        "clauses": [{
            "clause": c.clause,
            "verdict_name": c.verdict_name,
            "verdict": c.verdict,
            "label": c.label,
            "sampled": c.sampled,
            "passed": c.passed,
            "outcome": c.outcome,
            "falsified": c.falsifier is not None,
            "falsifier": sequence_value(c.falsifier),
        } for c in report.clauses],
        "disagreements": len(report.disagreements),
    }


def run_attached(command: Command, settings: SearchSettings) -> Dict:
    ideal = command.ideal
    ring = ideal.ring
    filtration = dimension_filtration(ideal)
    quotients = filtration.quotients()
    return {
        "associated_primes": primes_value(ring, associated_primes(ideal)),
        "attached": [primes_value(ring, att) for att in attached_prime_table(ideal.quotient_module())],
        "filtration": {
            "dimensions": list(filtration.dimensions),
            "submodules": [sequence_value(j.polys()) for j in filtration.chain],
            "cm": [is_cohen_macaulay(q) for q in quotients],
            "gcm": [is_generalized_cm(q) for q in quotients],
        },
    }


def run_p_standard(command: Command, settings: SearchSettings) -> Dict:
    m = command.ideal.quotient_module()
    sop = find_p_standard_sop(m, settings)
    result = {
        "annihilator_product": sequence_value(annihilator_product(m).polys()),
        "found": sop is not None,
        "sequence": sequence_value(sop),
        "lambdas": None,
        "verified": False,
        "mismatches": [],
    }
    if sop is not None:
        lambdas = fit_length_polynomial(m, sop)
        mismatches = verify_length_polynomial(m, sop, lambdas)
        result["lambdas"] = [rational_value(lam) for lam in lambdas]
        result["verified"] = not mismatches
        result["mismatches"] = [{"n": list(ns), "length": actual, "predicted": rational_value(predicted)}
                                for ns, actual, predicted in mismatches]
    return result


RUNNERS: Dict[str, Callable[[Command, SearchSettings], Dict]] = {
    "profile": run_profile,
    "classify": run_classify,
    "check-seq": run_check_sequence,
    "find-seq": run_find_sequence,
    "decide": run_decide,
    "invariants": run_invariants,
    "harness": run_harness,
    "attached": run_attached,
    "pstandard": run_p_standard,
}


@dataclass
class ReportDocument:
    source: str
    sha256: str
    variables: List[str]
    settings: SearchSettings
    results: List[Dict]
    timing: Optional[Dict] = None

    def as_dict(self) -> Dict:
        doc = {
            "engine": {"name": ENGINE_NAME, "version": __version__},
            "input": {"source": self.source, "sha256": self.sha256, "variables": list(self.variables)},
            "settings": {
                "seed": self.settings.seed,
                "samples": self.settings.samples,
                "budget": self.settings.retry_budget,
            },
            "results": self.results,
        }
        if self.timing is not None:
            doc["timing"] = self.timing
        return doc

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def to_human(self) -> str:
        lines = [f"{ENGINE_NAME} {__version__}  {self.source}  Q[{','.join(self.variables)}]",
                 f"seed {self.settings.seed}, samples {self.settings.samples}, "
                 f"budget {self.settings.retry_budget}"]
        for result in self.results:
            lines.append("")
            lines.append(f"{result['command']} {result['target']}")
            for key, value in result.items():
                if key in ("command", "target"):
                    continue
                lines.extend(_human_lines(key, value, 1))
        if self.timing is not None:
            lines.append("")
            lines.append(f"total {self.timing['total_seconds']:.3f}s")
        return "\n".join(lines) + "\n"


def _human_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return "[" + ", ".join(_human_value(v) for v in value) + "]"
    return str(value)


def _human_lines(key: str, value, depth: int) -> List[str]:
    pad = "  " * depth
    if isinstance(value, dict):
        lines = [f"{pad}{key}:"]
        for k, v in value.items():
            lines.extend(_human_lines(k, v, depth + 1))
        return lines
    if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        lines = [f"{pad}{key}:"]
        for item in value:
            lines.append(f"{pad}  -")
            for k, v in item.items():
                lines.extend(_human_lines(k, v, depth + 2))
        return lines
    return [f"{pad}{key}: {_human_value(value)}"]


def execute(command: Command, settings: SearchSettings = DEFAULT_SETTINGS) -> Dict:
    """ One command's result object, with engine errors re-raised naming the command. """
    logger.info(f"line {command.line}: {command.describe()} started")
    try:
        body = RUNNERS[command.name](command, settings)
    except SeqcmError as e:
        logger.error(f"line {command.line}: {command.describe()} failed: {e}")
        raise type(e)(f"line {command.line}: {command.describe()}: {e}", inner=e) from e
    return {"command": command.name, "target": command.target, **body}


def run_command(session: SessionInput, settings: SearchSettings = DEFAULT_SETTINGS,
                source: str = "<input>", timing: bool = False) -> ReportDocument:
    results, durations = [], []
    start = time.perf_counter()
    for command in session.commands:
        began = time.perf_counter()
        results.append(execute(command, settings))
        durations.append(time.perf_counter() - began)
        logger.info(f"line {command.line}: {command.describe()} finished in {durations[-1]:.3f}s")
    total = time.perf_counter() - start
    digest = hashlib.sha256(session.text.encode("utf-8")).hexdigest()
    timings = None
    if timing:
        timings = {"total_seconds": round(total, 6), "commands": [round(d, 6) for d in durations]}
    return ReportDocument(source, digest, list(session.ring.variable_names), settings, results, timings)
