from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from logging import getLogger
from typing import Dict, Optional

import yaml

from src.error import ConfigError

logger = getLogger(__name__)

TOOL_VERSION = '1.0.0'
MANIFEST_SUFFIX = '.manifest.yml'


@dataclass(frozen=True)
class RunManifest:
    """
    Provenance of one output file.

    Attributes:
        command: (str) CLI command that produced the file
        config: (dict) experiment config or estimation parameters
        output_path: (str) the file described
        emitted_at: (str) UTC timestamp in ISO 8601
        tool_version: (str) version of this package
        seed: (int or None) base seed of a simulation
    """
    command: str
    config: Dict
    output_path: str
    emitted_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    tool_version: str = TOOL_VERSION
    seed: Optional[int] = None

    def __post_init__(self):
        if not self.output_path:
            raise ConfigError('A manifest needs the path of its output file')

    @property
    def path(self) -> str:
        return self.output_path + MANIFEST_SUFFIX

    def write(self) -> str:
        with open(self.path, 'w') as stream:
            yaml.safe_dump(asdict(self), stream, sort_keys=False)
        logger.info('Wrote manifest {}'.format(self.path))
        return self.path

    @classmethod
    def load(cls, path: str) -> 'RunManifest':
        with open(path, 'r') as stream:
            return cls(**yaml.safe_load(stream))
