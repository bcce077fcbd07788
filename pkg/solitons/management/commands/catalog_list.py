from solitons.management.base import LabCommand


class Command(LabCommand):
    help = 'List the catalog families with their default parameters'
    mode = 'catalog-list'
