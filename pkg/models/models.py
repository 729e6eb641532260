from sqlalchemy import Column, Integer, String, Text, DateTime, ForeignKey, Index
from sqlalchemy.ext.declarative import declarative_base
from sqlalchemy.orm import relationship
from datetime import datetime

Base = declarative_base()


class VerificationRun(Base):
    """运行记录模型"""
    __tablename__ = 'verification_runs'

    id = Column(Integer, primary_key=True)
    command = Column(String(50), nullable=False, comment='子命令名称')
    spec_json = Column(Text, comment='网规格，JSON格式')
    method = Column(String(50), comment='计算方法')
    value = Column(Text, comment='结果值，num/den字符串')
    success = Column(Integer, default=1, comment='是否成功，1成功，0失败')
    error_message = Column(Text, comment='错误信息')
    created_at = Column(DateTime, default=datetime.utcnow, comment='运行时间')

    # 关系
    checks = relationship("SuiteCheck", back_populates="run", cascade="all, delete-orphan")

    __table_args__ = (
        Index('idx_run_command', 'command'),
    )

    def __repr__(self):
        return f"<VerificationRun(command='{self.command}', value='{self.value}')>"


class SuiteCheck(Base):
    """验证套件中单个恒等式的检查计数"""
    __tablename__ = 'suite_checks'

    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey('verification_runs.id'), nullable=False, comment='运行ID')
    suite = Column(String(50), nullable=False, comment='套件名称')
    identity = Column(String(100), nullable=False, comment='恒等式名称')
    checked = Column(Integer, default=0, comment='检查次数')
    mismatch = Column(Text, comment='首个不匹配的描述')

    run = relationship("VerificationRun", back_populates="checks")

    def __repr__(self):
        return f"<SuiteCheck(suite='{self.suite}', identity='{self.identity}', checked={self.checked})>"
