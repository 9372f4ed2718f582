package com.shop.service;

import com.shop.model.ShoppingCart;
import com.shop.repository.ShoppingCartRepository;

@Service
public class ShoppingCartServiceImpl extends AbstractEntityService<ShoppingCart>
        implements ShoppingCartService {

    private final ShoppingCartRepository shoppingCartRepository;

    public ShoppingCartServiceImpl(ShoppingCartRepository repository) {
        this.shoppingCartRepository = repository;
    }

    @Override
    public ShoppingCart getById(Long id) {
        return shoppingCartRepository.findById(id).orElse(null);
    }
}
