from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import sessionmaker
from contextlib import contextmanager
import logging

logger = logging.getLogger(__name__)


def create_db_engine(database_url: str, echo: bool = False) -> Engine:
    """按Settings中的数据库URL创建引擎"""
    logger.debug(f"creating engine for {database_url}")
    return create_engine(database_url, echo=echo)


def create_session_factory(engine: Engine) -> sessionmaker:
    """创建会话工厂"""
    return sessionmaker(autocommit=False, autoflush=False, bind=engine)


@contextmanager
def get_db_session(session_factory: sessionmaker):
    """获取数据库会话的上下文管理器"""
    session = session_factory()
    try:
        yield session
        session.commit()
    except Exception as e:
        session.rollback()
        raise e
    finally:
        session.close()


def init_database(engine: Engine):
    """初始化数据库"""
    from models.models import Base
    Base.metadata.create_all(bind=engine)
    logger.info("run ledger tables created")
