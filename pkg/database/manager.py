"""
Run ledger: records CLI runs and verification suite counts
"""

import json
import logging
from typing import Any, Dict, List, Optional

from config.settings import Settings, load_settings
from database.connection import create_db_engine, create_session_factory, get_db_session, init_database
from models.models import SuiteCheck, VerificationRun
from models.types import SuiteResult

logger = logging.getLogger(__name__)


class RunLedger:
    """运行记录管理类"""

    def __init__(self, database_url: Optional[str] = None, echo: bool = False):
        """
        初始化运行记录

        Args:
            database_url: 数据库URL，缺省取load_settings().database_url
            echo: 是否输出SQL
        """
        if database_url is None:
            settings = load_settings()
            database_url, echo = settings.database_url, settings.database_echo
        self.database_url = database_url
        self.engine = create_db_engine(database_url, echo)
        self.SessionLocal = create_session_factory(self.engine)
        init_database(self.engine)

    @classmethod
    def from_settings(cls, settings: Settings) -> "RunLedger":
        """使用Settings中的数据库配置"""
        return cls(settings.database_url, settings.database_echo)

    def record_run(self, command: str, spec: Optional[Dict[str, Any]] = None,
                   method: Optional[str] = None, value: Optional[str] = None,
                   success: bool = True, error: Optional[str] = None,
                   suites: Optional[List[SuiteResult]] = None) -> int:
        """
        保存一次运行

        Args:
            command: 子命令
            spec: 网规格字典
            method: 计算方法
            value: 结果值字符串
            success: 是否成功
            error: 错误信息
            suites: verify命令的套件结果
        Returns:
            运行ID
        """
        with get_db_session(self.SessionLocal) as session:
            run = VerificationRun(
                command=command,
                spec_json=json.dumps(spec, ensure_ascii=False) if spec else None,
                method=method,
                value=value,
                success=1 if success else 0,
                error_message=error,
            )
            for result in suites or []:
                first = result.mismatch
                for identity, count in result.checked.items():
                    mismatch = None
                    if first is not None and first.identity == identity:
                        mismatch = f"{first.params}: expected {first.expected}, got {first.actual}"
                    run.checks.append(SuiteCheck(suite=result.suite, identity=identity,
                                                 checked=count, mismatch=mismatch))
            session.add(run)
            session.flush()
            run_id = run.id
        logger.info(f"recorded run {run_id}: {command}")
        return run_id

    def recent_runs(self, limit: int = 20) -> List[Dict[str, Any]]:
        """最近的运行，按时间倒序"""
        with get_db_session(self.SessionLocal) as session:
            runs = (session.query(VerificationRun)
                    .order_by(VerificationRun.id.desc())
                    .limit(limit)
                    .all())
            return [{
                'id': run.id,
                'command': run.command,
                'method': run.method,
                'value': run.value,
                'success': bool(run.success),
                'error': run.error_message,
                'created_at': run.created_at.isoformat() if run.created_at else None,
                'checks': sum(check.checked for check in run.checks),
            } for run in runs]
