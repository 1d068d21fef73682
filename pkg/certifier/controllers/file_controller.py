import json
import logging
import os
import sys
from typing import Dict, List, Optional

import pandas as pd

from ..utils.configuration import ConfigError, OutputFormat
from ..utils.report import CheckReport

logger = logging.getLogger(__name__)


class FileController:
    SHEET_NAME = "Results"

    @staticmethod
    def ensure_folder_exists(location):
        if location and not os.path.exists(location):
            os.makedirs(location)

    @staticmethod
    def write_text(text: str, path: Optional[str], newline: Optional[str] = None):
        if path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return

        FileController.ensure_folder_exists(os.path.dirname(os.path.abspath(path)))
        with open(path, "w", encoding="utf-8", newline=newline) as f:
            f.write(text)
        logger.info("wrote %s", path)

    @staticmethod
    def write_table(df: pd.DataFrame, path: Optional[str], output_format: OutputFormat, text: Optional[str] = None):
        """Writes a table; `text` replaces the default plain rendering."""
        match output_format:
            case OutputFormat.CSV:
                # RFC 4180 line endings, empty cells for missing values
                FileController.write_text(df.to_csv(index=False, lineterminator="\r\n", na_rep=""), path, newline="")
            case OutputFormat.JSON:
                FileController.write_json(json.loads(df.to_json(orient="records")), path)
            case OutputFormat.TEXT:
                FileController.write_text(text if text is not None else df.to_string(index=False) + "\n", path)
            case OutputFormat.XLSX:
                if path is None:
                    raise ConfigError("the xlsx format needs an output path")
                FileController.write_sheets({FileController.SHEET_NAME: df}, path)

    @staticmethod
    def write_csv_sections(frames: List[pd.DataFrame], path: Optional[str]):
        """Several CSV tables in one stream, each with its own header, separated by an empty line."""
        sections = [df.to_csv(index=False, lineterminator="\r\n", na_rep="") for df in frames]
        FileController.write_text("\r\n".join(sections), path, newline="")

    @staticmethod
    def write_report(report: CheckReport, path: Optional[str], output_format: OutputFormat):
        match output_format:
            case OutputFormat.JSON:
                FileController.write_json(report.to_json(), path)
            case _:
                FileController.write_table(report.to_frame(), path, output_format, text=report.to_text())

    @staticmethod
    def read_report(path: str) -> CheckReport:
        with open(path, "r", encoding="utf-8") as f:
            return CheckReport.from_json(json.load(f))

    @staticmethod
    def write_json(data, path: Optional[str]):
        FileController.write_text(json.dumps(data, indent=2) + "\n", path)

    @staticmethod
    def write_sheets(frames: Dict[str, pd.DataFrame], path: str):
        FileController.ensure_folder_exists(os.path.dirname(os.path.abspath(path)))
        with pd.ExcelWriter(path, engine="openpyxl") as writer:
            for sheet_name, df in frames.items():
                df.to_excel(writer, sheet_name=sheet_name, index=False)
        logger.info("wrote %s", path)
