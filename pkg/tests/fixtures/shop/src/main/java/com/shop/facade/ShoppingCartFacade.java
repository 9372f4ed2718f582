package com.shop.facade;

import com.shop.model.ShoppingCart;

/** Facade used by the web layer to manipulate a shopping cart. */
public interface ShoppingCartFacade {

    ShoppingCart getCart(Long id);

    void addItem(Long cartId, Long productId, int quantity);
}
