# Generated by Django 5.1 on 2026-10-17 09:12

import gom.validators
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='GomModule',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('name', models.CharField(max_length=100, unique=True, verbose_name='Имя модуля')),
                ('source', models.TextField(validators=[gom.validators.validate_gom_source], verbose_name='Исходный текст')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='Создан')),
            ],
            options={
                'verbose_name': 'Модуль сигнатуры',
                'verbose_name_plural': 'Модули сигнатур',
                'ordering': ['name'],
            },
        ),
        migrations.CreateModel(
            name='ProofRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('expression', models.TextField(verbose_name='Цель')),
                ('config', models.JSONField(blank=True, default=dict, validators=[gom.validators.validate_proof_config], verbose_name='Параметры поиска')),
                ('status', models.CharField(choices=[('in_progress', 'В работе'), ('proved', 'Доказано'), ('refuted', 'Опровергнуто'), ('bound_exceeded', 'Превышен предел'), ('error', 'Ошибка')], default='in_progress', max_length=50, verbose_name='Статус')),
                ('steps', models.JSONField(blank=True, default=list, verbose_name='Шаги вывода')),
                ('explored', models.IntegerField(default=0, verbose_name='Просмотрено состояний')),
                ('error_message', models.TextField(blank=True, null=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Поиск доказательства',
                'verbose_name_plural': 'Поиски доказательств',
                'ordering': ['-created_at'],
            },
        ),
    ]
