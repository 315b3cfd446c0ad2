"""Workbench: the object that runs commands and stores their artifacts"""

import io
import json
import logging
import sys
from importlib import import_module

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import storage as storage_package
from .config import as_config
from .corners import CornerCertificate, certify_corner, corner_scan
from .errors import ContractViolationError, InvalidInputError
from .frames import derive_seed
from .numerics import ComplexMatrix
from .ranges import (
    PointCloud,
    boundary_directions,
    leading_compressions,
    sample_cloud,
    support_exact_1d,
    support_stiefel,
)
from .serialization import cloud_csv, dumps
from .storage import BaseStorage
from .verify import build_cloud, check_theorem_1_1, check_theorem_1_2, property_suite

OUT_DIR = "numrange-out"

CLOUD_FILE = "cloud.json"
CLOUD_CSV = "cloud.csv"
SUPPORT_FILE = "support.json"
CORNERS_FILE = "corners.json"
SUITE_FILE = "suite.json"
PLOT_FILE = "cloud.svg"


def theorem_file(theorem):
    return f"theorem_{theorem}.json"


class Workbench:
    """Runs the numerical range commands and writes their artifacts.

    Every artifact carries the command name, the matrix fingerprint and the full
    run configuration, so identical inputs always give identical bytes.

    Attributes:
        config (RunConfig): run parameters.
        storage (BaseStorage): where artifacts go.
        logger (Logger): A Logger object used for logging
    """

    def __init__(self, storage=None, log_level=logging.INFO, config=None):
        """Init the workbench.

        Args:
            storage (dict or BaseStorage): storage backend configuration or instance,
                default ``{"backend": "FileSystem", "root_dir": "numrange-out"}``.
            log_level: logging level for the logger
            config (RunConfig or dict, optional): run parameters.
        """
        self.set_logger(log_level)
        self.set_storage({"backend": "FileSystem", "root_dir": OUT_DIR} if storage is None else storage)
        self.set_config(config)

    def set_logger(self, log_level=logging.INFO):
        """Configure the logger with log_level."""
        logging.basicConfig(
            format="%(asctime)s - %(levelname)s - %(name)s - %(message)s", level=log_level, stream=sys.stderr
        )
        self.logger = logging.getLogger(__name__)
        logging.getLogger("matplotlib").setLevel(logging.WARNING)

    def set_storage(self, storage):
        """Set storage backend for artifacts

        For full list of storage backend supported, please see :mod:`storage`.

        Args:
            storage (dict or BaseStorage): storage backend configuration or instance
        """
        if isinstance(storage, BaseStorage):
            self.storage = storage
        elif isinstance(storage, dict):
            storage = dict(storage)
            if "backend" not in storage and "root_dir" in storage:
                storage["backend"] = "FileSystem"
            try:
                backend_cls = getattr(storage_package, storage["backend"])
            except AttributeError:
                module_name, _, cls_name = storage["backend"].rpartition(".")
                try:
                    backend_cls = getattr(import_module(module_name), cls_name)
                except (ImportError, AttributeError, ValueError) as e:
                    raise InvalidInputError(f"cannot find storage backend {storage['backend']}") from e
            kwargs = storage.copy()
            del kwargs["backend"]
            self.storage = backend_cls(**kwargs)
        else:
            raise TypeError('"storage" must be a storage object or dict')

    def set_config(self, config=None):
        self.config = as_config(config)

    def save(self, id, payload):
        data = payload if isinstance(payload, str) else dumps(payload)
        self.storage.write(id, data)
        self.logger.info("wrote %s", id)

    def load(self, id):
        return json.loads(self.storage.read(id))

    def envelope(self, command, fingerprint, **body):
        return {"command": command, "fingerprint": fingerprint, **body, "config": self.config.dict()}

    def sample(self, T, csv=False):
        """Sample ``config.samples`` Haar points of ``W_n(T)`` and store ``cloud.json``."""
        T = ComplexMatrix.coerce(T)
        config = self.config
        cloud = sample_cloud(T, config.n, config.samples, seed=config.seed, workers=config.workers)
        self.save(CLOUD_FILE, self.envelope("sample", T.fingerprint, cloud=cloud.to_dict()))
        if csv:
            self.save(CLOUD_CSV, cloud_csv(cloud))
        return cloud

    def support(self, T, directions=None):
        """Support values in the given unit directions, or in the boundary directions when omitted."""
        T = ComplexMatrix.coerce(T)
        n = self.config.n
        if directions is None:
            directions = boundary_directions(n, self.config.directions, self.config.seed)
        results = []
        entries = []
        with self.config.applied_tolerances():
            for k, w in enumerate(directions):
                w = np.asarray(w, dtype=np.complex128).reshape(-1)
                result = support_stiefel(
                    T,
                    n,
                    w,
                    self.config.restarts,
                    seed=derive_seed(self.config.seed, k),
                    workers=self.config.workers,
                )
                entry = result.to_dict()
                if n == 1:
                    entry["exact"] = support_exact_1d(T, float(np.angle(w[0])))[0]
                results.append(result)
                entries.append(entry)
        self.save(SUPPORT_FILE, self.envelope("support", T.fingerprint, results=entries))
        return results

    def corners(self, T):
        """Sample, scan and certify; stores ``cloud.json`` and ``corners.json``."""
        T = ComplexMatrix.coerce(T)
        config = self.config
        with config.applied_tolerances():
            cloud = build_cloud(T, config.n, config)
            self.save(CLOUD_FILE, self.envelope("corners", T.fingerprint, cloud=cloud.to_dict()))
            found = corner_scan(
                cloud, config.delta_min, config.epsilon, config.directions, workers=config.workers, seed=config.seed
            )
            certificates = [
                certify_corner(
                    T,
                    cloud,
                    c.point,
                    config.epsilon,
                    config.delta_min,
                    seed=derive_seed(config.seed, i),
                    exterior_count=config.exterior_count,
                )
                for i, c in enumerate(found)
            ]
        self.save(
            CORNERS_FILE,
            self.envelope("corners", T.fingerprint, certificates=[c.to_dict() for c in certificates]),
        )
        return certificates

    def verify(self, theorem, matrices, target=None, family_sizes=None):
        """Run a theorem check; ``"1.2"`` takes a family, or one matrix and ``family_sizes``."""
        matrices = [ComplexMatrix.coerce(T) for T in matrices]
        if not matrices:
            raise InvalidInputError("at least one matrix is required")
        if theorem == "1.1":
            if len(matrices) != 1:
                raise InvalidInputError("theorem 1.1 is checked on a single matrix")
            report = check_theorem_1_1(matrices[0], config=self.config)
        elif theorem == "1.2":
            if target is None:
                raise InvalidInputError("theorem 1.2 needs a target point")
            family = matrices
            if family_sizes:
                if len(matrices) != 1:
                    raise InvalidInputError("family sizes build the family from a single matrix")
                family = leading_compressions(matrices[0], family_sizes)
            report = check_theorem_1_2(family, target, config=self.config)
        else:
            raise InvalidInputError(f"unknown theorem {theorem!r}, expected 1.1 or 1.2")
        self.save(theorem_file(theorem), {"command": "verify", **report.to_dict()})
        return report

    def suite(self, T):
        report = property_suite(ComplexMatrix.coerce(T), config=self.config)
        self.save(SUITE_FILE, {"command": "suite", **report.to_dict()})
        return report

    def stored_cloud(self):
        data = self.load(CLOUD_FILE)
        return PointCloud.from_dict(data["cloud"])

    def stored_certificates(self):
        if not self.storage.exists(CORNERS_FILE):
            return []
        return [CornerCertificate.from_dict(c) for c in self.load(CORNERS_FILE)["certificates"]]

    def revalidate(self, T=None):
        """Reread the stored cloud and certificates and re-check every certificate.

        Returns:
            list: problems found, empty when every certificate holds.
        """
        cloud = self.stored_cloud()
        if T is not None:
            check_fingerprint(cloud, ComplexMatrix.coerce(T))
        problems = []
        for i, certificate in enumerate(self.stored_certificates()):
            problems += [f"certificate {i}: {p}" for p in certificate.revalidate(cloud, T)]
        return problems

    def plot(self, axes=None):
        """Render the stored cloud as an SVG scatter with the stored corners marked."""
        cloud = self.stored_cloud()
        certificates = self.stored_certificates()
        svg = render_cloud(cloud, certificates, axes)
        self.save(PLOT_FILE, svg)
        return svg


def parse_axes(text, n):
    """``"re1,im2"`` to ``[(0, "re"), (1, "im")]`` with 0-based coordinates."""
    axes = []
    for token in str(text).split(","):
        token = token.strip().lower()
        part, index = token[:2], token[2:]
        if part not in ("re", "im") or not index.isdigit() or not 1 <= int(index) <= n:
            raise InvalidInputError(f"axis {token!r} must be re<j> or im<j> with 1 <= j <= {n}")
        axes.append((int(index) - 1, part))
    if len(axes) != 2:
        raise InvalidInputError(f"expected two axes, got {text!r}")
    return axes


def default_axes(n):
    return "re1,im1" if n == 1 else "re1,re2"


def _coordinate(values, axis):
    j, part = axis
    column = np.asarray(values)[:, j]
    return column.real if part == "re" else column.imag


def render_cloud(cloud, certificates=(), axes=None):
    """SVG scatter of a two-dimensional real projection of the cloud."""
    axes = parse_axes(axes or default_axes(cloud.n), cloud.n)
    labels = [f"{part} z{j + 1}" for j, part in axes]
    with matplotlib.rc_context({"svg.hashsalt": "numrange", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6, 6))
        ax.scatter(_coordinate(cloud.values, axes[0]), _coordinate(cloud.values, axes[1]), s=1, c="tab:blue", alpha=0.4)
        if certificates:
            points = np.array([c.point.value for c in certificates])
            ax.scatter(_coordinate(points, axes[0]), _coordinate(points, axes[1]), s=60, c="tab:red", marker="x")
        ax.set_xlabel(labels[0])
        ax.set_ylabel(labels[1])
        ax.set_title(f"W_{cloud.n} sample of {cloud.fingerprint}")
        ax.set_aspect("equal", adjustable="datalim")
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()


def check_fingerprint(cloud, T):
    if cloud.fingerprint != T.fingerprint:
        raise ContractViolationError(f"stored cloud belongs to {cloud.fingerprint}, not {T.fingerprint}")
