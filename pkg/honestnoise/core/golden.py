"""
Reproduction of the published approximation tables

Each table is recomputed from the preset channels and compared cell by cell
with the golden dataset under ``data/golden``. Approximations are cached per
run so that tables sharing a channel (I and IV) optimize it once.
"""
import json
import logging
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from honestnoise import __version__
from honestnoise.core import config
from honestnoise.core.approximator import (
    ApproximationResult,
    approximate,
    approximate_pauli,
    approximate_two_qubit_sparse,
    mixing_set,
)
from honestnoise.core.channels import QuantumChannel, kraus_to_chi
from honestnoise.core.diamond import diamond_distance
from honestnoise.core.twirl import pauli_twirl
from honestnoise.core.zoo import table_channels
from honestnoise.models.schemas import GoldenCell, OptimizerOptions, TableCell, TableComparison

logger = logging.getLogger(__name__)

GOLDEN_FILE = Path("golden") / "published_tables.json"
TABLES = (1, 2, 3, 4, 5)
TABLE_ONE_ROWS = ("lambda1", "lambda2", "lambda3_0", "lambda3_1", "lambda3_2", "lambda3_3", "lambda3_4")
TABLE_FOUR_ROWS = ("lambda1", "lambda3_0", "lambda3_1", "lambda3_2")
SPARSE_SUPPORT = ("II", "XX")

CellKey = Tuple[str, str]


def load_golden(path: Optional[Path] = None) -> List[GoldenCell]:
    """
    Load the golden dataset

    Raises:
        FileNotFoundError: If the dataset is missing
    """
    path = path or config.get_data_dir() / GOLDEN_FILE
    with open(path, "r", encoding="utf-8") as f:
        document = json.load(f)
    return [GoldenCell(**cell) for cell in document["cells"]]


def _diag_cells(result: ApproximationResult, row: str) -> Dict[CellKey, float]:
    cells = {(row, f"chi{i}{i}"): float(result.chi_diag[i]) for i in range(4)}
    cells[(row, "diamond")] = result.diamond_dist
    return cells


class TableRunner:
    """Computes table cells, sharing approximations between tables"""

    def __init__(self, opts: Optional[OptimizerOptions] = None):
        self.opts = opts or OptimizerOptions()
        self.channels: Dict[str, QuantumChannel] = table_channels()
        self._pauli: Dict[str, ApproximationResult] = {}
        self._builders: Dict[int, Callable[[], Dict[CellKey, float]]] = {
            1: self.table_one,
            2: self.table_two,
            3: self.table_three,
            4: self.table_four,
            5: self.table_five,
        }

    def pauli_approximation(self, label: str) -> ApproximationResult:
        if label not in self._pauli:
            logger.info("Pauli approximation of %s", label)
            self._pauli[label] = approximate_pauli(self.channels[label], self.opts)
        return self._pauli[label]

    def table_one(self) -> Dict[CellKey, float]:
        cells = {}
        for row in TABLE_ONE_ROWS:
            cells.update(_diag_cells(self.pauli_approximation(row), row))
        return cells

    def table_two(self) -> Dict[CellKey, float]:
        chi00 = {label: float(kraus_to_chi(ch).chi[0, 0].real) for label, ch in self.channels.items()}
        return {
            ("lambda1", "chi00"): chi00["lambda1"],
            ("lambda2", "chi00"): chi00["lambda2"],
            ("lambda3", "chi00"): chi00["lambda3_0"],
        }

    def table_three(self) -> Dict[CellKey, float]:
        result = approximate(self.channels["lambda3_0"], mixing_set("pauli+Z90"), self.opts)
        logger.info("Z90 mixture weights: %s", result.mixture.weights())
        return _diag_cells(result, "lambda3_0")

    def table_four(self) -> Dict[CellKey, float]:
        cells = {}
        for row in TABLE_FOUR_ROWS:
            ch = self.channels[row]
            cells[(row, "twirl_diamond")] = diamond_distance(ch, pauli_twirl(ch)).value
            cells[(row, "pauli_diamond")] = self.pauli_approximation(row).diamond_dist
        return cells

    def table_five(self) -> Dict[CellKey, float]:
        result = approximate_two_qubit_sparse(self.channels["lambda2q"], SPARSE_SUPPORT, self.opts)
        labels = result.mixture.chi().labels
        return {
            ("lambda2q", "chi_II"): float(result.chi_diag[labels.index("II")]),
            ("lambda2q", "chi_XX"): float(result.chi_diag[labels.index("XX")]),
            ("lambda2q", "diamond"): result.diamond_dist,
        }

    def compute(self, table: int) -> Dict[CellKey, float]:
        """
        Raises:
            ValueError: If the table number is unknown
        """
        try:
            builder = self._builders[table]
        except KeyError:
            raise ValueError(f"unknown table {table}; expected one of {TABLES}")
        return builder()


def compare(golden: Iterable[GoldenCell], computed: Dict[CellKey, float],
            tol: Optional[float] = None) -> List[TableCell]:
    """Pair computed values with golden cells; ``tol`` overrides every cell's tolerance"""
    cells = []
    for cell in golden:
        value = computed[(cell.row, cell.column)]
        deviation = abs(value - cell.value)
        limit = cell.tol if tol is None else tol
        cells.append(TableCell(
            table=cell.table,
            row=cell.row,
            column=cell.column,
            computed=value,
            published=cell.value,
            deviation=deviation,
            tol=limit,
            passed=deviation <= limit,
            provenance=cell.provenance,
        ))
        logger.debug("table %d %s/%s: computed %.6f published %.4f deviation %.2e", cell.table, cell.row,
                     cell.column, value, cell.value, deviation)
    return cells


def reproduce_tables(tables: Iterable[int] = TABLES, opts: Optional[OptimizerOptions] = None,
                     tol: Optional[float] = None, golden_path: Optional[Path] = None) -> TableComparison:
    """
    Recompute the requested tables and compare them with the golden dataset

    Raises:
        ValueError: If a table number is unknown
        InfeasibleError, SolverFailureError: Propagated from the optimizer
    """
    tables = sorted(set(tables))
    golden = load_golden(golden_path)
    runner = TableRunner(opts)
    cells: List[TableCell] = []
    for table in tables:
        computed = runner.compute(table)
        cells.extend(compare([c for c in golden if c.table == table], computed, tol))
    return TableComparison(tool_version=__version__, tables=tables, options=runner.opts, cells=cells)


def format_comparison(comparison: TableComparison) -> str:
    """Fixed-width text rendering with 4-decimal values"""
    lines = [f"{'table':>5}  {'row':<10} {'column':<14} {'computed':>9} {'published':>9} {'deviation':>9}  result"]
    for cell in comparison.cells:
        lines.append(
            f"{cell.table:>5}  {cell.row:<10} {cell.column:<14} {cell.computed:>9.4f} {cell.published:>9.4f} "
            f"{cell.deviation:>9.1e}  {'pass' if cell.passed else 'FAIL'}"
        )
    lines.append(f"worst deviation {comparison.worst_deviation:.2e}: {'pass' if comparison.passed else 'FAIL'}")
    return "\n".join(lines)
