"""
Run manifests for reproducible outputs
"""

import os
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from secretary_cutoffs import __version__
from secretary_cutoffs.models import RunManifest

SOURCE_DATE_EPOCH = "SOURCE_DATE_EPOCH"


class ManifestBuilder:
    """Build the provenance block attached to every JSON output"""

    def __init__(self, tool_version: str = __version__):
        self.tool_version = tool_version

    def build(self, command: str, parameters: Dict[str, Any], seed: Optional[int] = None) -> RunManifest:
        """
        Build a manifest

        The timestamp honours SOURCE_DATE_EPOCH, so reruns can be byte-identical.

        Args:
            command: Subcommand name
            parameters: Resolved parameter values
            seed: Random seed, if the command is random
        """
        return RunManifest(
            command=command,
            parameters=dict(sorted(parameters.items())),
            seed=seed,
            tool_version=self.tool_version,
            timestamp=self.timestamp(),
        )

    @staticmethod
    def timestamp() -> str:
        epoch = os.getenv(SOURCE_DATE_EPOCH)
        if epoch and epoch.strip().isdigit():
            moment = datetime.fromtimestamp(int(epoch), tz=timezone.utc)
        else:
            moment = datetime.now(timezone.utc)
        return moment.replace(microsecond=0).isoformat()
