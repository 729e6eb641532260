"""
Runtime settings from environment variables and the YAML suite file
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from models.errors import ParameterError

logger = logging.getLogger(__name__)

# 加载环境变量
load_dotenv()

DEFAULT_SUITES_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'suites.yaml')


@dataclass
class Settings:
    """运行配置"""
    threads: int = 1
    log_level: str = 'WARNING'
    database_url: str = 'sqlite:///digital_net_runs.db'
    database_echo: bool = False
    suites_file: str = DEFAULT_SUITES_FILE
    suites: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def suite_options(self, suite: str) -> Dict[str, Any]:
        """套件配置，defaults段在前，套件自身的键覆盖它"""
        merged = dict(self.suites.get('defaults', {}))
        merged.update(self.suites.get(suite, {}))
        return merged


def load_suites(path: str) -> Dict[str, Dict[str, Any]]:
    """
    读取套件配置YAML

    Args:
        path: YAML文件路径
    Returns:
        套件名到参数字典的映射；文件不存在时返回空字典
    """
    if not os.path.exists(path):
        logger.debug(f"suite file not found: {path}")
        return {}
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ParameterError(f"invalid suite file {path}: {e}")
    if not isinstance(data, dict):
        raise ParameterError(f"suite file {path} must contain a mapping")
    return data


def load_settings(suites_file: Optional[str] = None) -> Settings:
    """从环境变量与YAML文件构造Settings"""
    try:
        threads = int(os.getenv('DNET_THREADS', '1'))
    except ValueError:
        raise ParameterError(f"DNET_THREADS must be an integer, got {os.getenv('DNET_THREADS')!r}")
    path = suites_file or os.getenv('DNET_SUITES_FILE', DEFAULT_SUITES_FILE)
    return Settings(
        threads=max(1, threads),
        log_level=os.getenv('DNET_LOG_LEVEL', 'WARNING').upper(),
        database_url=os.getenv('DNET_DATABASE_URL', 'sqlite:///digital_net_runs.db'),
        database_echo=os.getenv('DNET_DATABASE_ECHO', 'false').lower() == 'true',
        suites_file=path,
        suites=load_suites(path),
    )
